#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace twistlab {

using Rational = mpq_class;
using Integer = mpz_class;

inline Rational rat(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Accepts "3", "-3/4" and finite decimals like "0.25".
inline Rational parse_rational(const std::string& text) {
  std::string s = text;
  if (s.empty()) throw std::runtime_error("empty rational literal");
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    size_t frac_len = s.size() - dot - 1;
    if (frac_len == 0) throw std::runtime_error("bad rational literal: " + text);
    Rational r(Integer(digits), Integer(1));
    for (size_t i = 0; i < frac_len; ++i) r /= 10;
    r.canonicalize();
    return r;
  }
  try {
    Rational r(s);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw std::runtime_error("bad rational literal: " + text);
  }
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

using RatVec = std::vector<Rational>;
using RatMat = std::vector<RatVec>;

}  // namespace twistlab
