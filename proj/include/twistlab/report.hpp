#pragma once

#include <string>

namespace twistlab {

// Outcome of a structural verification sweep. `ok` stays true until the first
// violation; `first_violation` then names the simplex/identity that failed.
struct CheckReport {
  bool ok = true;
  std::string first_violation;
  long checks = 0;

  void count() { ++checks; }
  void fail(const std::string& what) {
    if (ok) {
      ok = false;
      first_violation = what;
    }
  }
  void merge(const CheckReport& other) {
    checks += other.checks;
    if (!other.ok) fail(other.first_violation);
  }
};

}  // namespace twistlab
