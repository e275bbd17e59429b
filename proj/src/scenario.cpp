#include "twistlab/scenario.hpp"

#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include "twistlab/reduce.hpp"

namespace twistlab {

uint64_t fnv1a(const std::string& data) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

const Cochain& Scenario::cochain(const std::string& n) const {
  auto it = cochains.find(n);
  if (it == cochains.end())
    throw std::runtime_error("unknown cochain '" + n + "' in scenario " + name);
  return it->second;
}

std::shared_ptr<const TwistingFunction> Scenario::twisting(const std::string& n) const {
  auto it = twist_cache_.find(n);
  if (it != twist_cache_.end()) return it->second;
  auto tw = std::make_shared<const TwistingFunction>(
      TwistingFunction::from_cocycle(cochain(n)));
  twist_cache_.emplace(n, tw);
  return tw;
}

namespace {

int default_max_dim() {
  if (const char* env = std::getenv("TWISTLAB_MAX_DIM")) {
    int v = std::atoi(env);
    if (v < 1 || v > 6)
      throw std::runtime_error("TWISTLAB_MAX_DIM must be between 1 and 6");
    return v;
  }
  return 3;
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '+' ||
          c == '-' || c == '*'))
      return false;
  return true;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

struct SectionHeader {
  std::string kind;
  std::vector<std::string> words;           // positional parts after the kind
  std::map<std::string, std::string> kv;    // key=value parts
};

SectionHeader parse_header(const std::string& inner, int line_no) {
  SectionHeader h;
  auto toks = split_ws(inner);
  if (toks.empty()) throw ParseError(line_no, "empty section header");
  h.kind = toks[0];
  for (size_t i = 1; i < toks.size(); ++i) {
    auto eq = toks[i].find('=');
    if (eq == std::string::npos)
      h.words.push_back(toks[i]);
    else
      h.kv[toks[i].substr(0, eq)] = toks[i].substr(eq + 1);
  }
  return h;
}

// Simplex reference: either a plain name or a degeneracy word "s1.s0.name".
struct SimplexRef {
  std::vector<int> word;  // outermost first, as written
  std::string base;
};

SimplexRef parse_simplex_ref(const std::string& tok, int line_no) {
  SimplexRef r;
  size_t pos = 0;
  while (true) {
    size_t dot = tok.find('.', pos);
    if (dot == std::string::npos) break;
    std::string part = tok.substr(pos, dot - pos);
    if (part.size() < 2 || part[0] != 's')
      throw ParseError(line_no, "bad degeneracy prefix in '" + tok + "'");
    r.word.push_back(std::stoi(part.substr(1)));
    pos = dot + 1;
  }
  r.base = tok.substr(pos);
  if (!valid_name(r.base))
    throw ParseError(line_no, "bad simplex name '" + r.base + "'");
  return r;
}

struct PendingSimplices {
  std::vector<std::string> vertices;
  // name, face tokens (d0, d1, ...)
  std::vector<std::pair<std::string, std::vector<std::string>>> edges, triangles,
      tetrahedra;
  std::map<std::string, int> decl_line;
};

std::shared_ptr<const SimplicialSet> assemble(const PendingSimplices& ps,
                                              int max_dim, int line_no) {
  if (ps.vertices.empty()) throw ParseError(line_no, "no [vertices] section");
  int need = !ps.tetrahedra.empty() ? 3 : (!ps.triangles.empty() ? 2 : 1);
  if (need > max_dim)
    throw ParseError(line_no, "scenario needs dimension " + std::to_string(need) +
                                  " but the cap is " + std::to_string(max_dim) +
                                  " (set TWISTLAB_MAX_DIM)");
  std::vector<std::vector<std::string>> names(max_dim + 1);
  names[0] = ps.vertices;
  for (auto& [n, f] : ps.edges) names[1].push_back(n);
  for (auto& [n, f] : ps.triangles) names[2].push_back(n);
  for (auto& [n, f] : ps.tetrahedra) names[3].push_back(n);

  std::vector<std::map<std::string, int>> index(max_dim + 1);
  for (int d = 0; d <= max_dim; ++d)
    for (size_t i = 0; i < names[d].size(); ++i) {
      if (!valid_name(names[d][i]))
        throw ParseError(line_no, "bad simplex name '" + names[d][i] + "'");
      if (!index[d].emplace(names[d][i], static_cast<int>(i)).second)
        throw ParseError(line_no, "duplicate simplex name '" + names[d][i] + "'");
    }

  auto resolve = [&](const std::string& tok, int dim, int at_line) {
    SimplexRef r = parse_simplex_ref(tok, at_line);
    int base_dim = dim - static_cast<int>(r.word.size());
    if (base_dim < 0)
      throw ParseError(at_line, "degeneracy word too long in '" + tok + "'");
    auto it = index[base_dim].find(r.base);
    if (it == index[base_dim].end())
      throw ParseError(at_line, "unknown " + std::to_string(base_dim) +
                                    "-simplex '" + r.base + "'");
    // The written word is outermost-first; canonical degens are increasing.
    std::vector<int> degens(r.word.rbegin(), r.word.rend());
    for (size_t i = 1; i < degens.size(); ++i)
      if (degens[i] <= degens[i - 1])
        throw ParseError(at_line, "degeneracy word in '" + tok +
                                      "' is not in canonical order");
    EZForm e{SimplexId{base_dim, it->second}, degens};
    if (e.dim() != dim)
      throw ParseError(at_line, "simplex '" + tok + "' has the wrong dimension");
    return e;
  };

  std::vector<std::vector<std::vector<EZForm>>> faces(max_dim + 1);
  auto fill = [&](const std::vector<std::pair<std::string, std::vector<std::string>>>&
                      rows,
                  int dim) {
    for (const auto& [n, ftoks] : rows) {
      int at = ps.decl_line.at(n);
      if (static_cast<int>(ftoks.size()) != dim + 1)
        throw ParseError(at, "simplex '" + n + "' needs " + std::to_string(dim + 1) +
                                 " faces");
      std::vector<EZForm> row;
      for (const auto& tok : ftoks) row.push_back(resolve(tok, dim - 1, at));
      faces[dim].push_back(std::move(row));
    }
  };
  fill(ps.edges, 1);
  fill(ps.triangles, 2);
  fill(ps.tetrahedra, 3);

  auto space = std::make_shared<SimplicialSet>(max_dim, names, faces);
  CheckReport rep = check_simplicial(*space);
  if (!rep.ok) throw ParseError(line_no, "simplicial identity violated: " +
                                             rep.first_violation);
  return space;
}

}  // namespace

Scenario parse_scenario_text(const std::string& text, const std::string& name_hint) {
  Scenario s;
  s.name = name_hint;
  s.content_hash = [&] {
    std::ostringstream os;
    os << std::hex << fnv1a(text);
    return os.str();
  }();

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  int max_dim = default_max_dim();

  PendingSimplices ps;
  bool space_built = false;

  enum class Mode {
    None,
    Vertices,
    Edges,
    Triangles,
    Tetrahedra,
    Cochain,
    Pauli,
    Distribution,
    Subcomplex,
    Symmetry
  };
  Mode mode = Mode::None;
  std::string current;  // name of the open named section
  int section_line = 0;

  // Distribution staging: entries checked and summed when the section closes.
  struct PendingDist {
    std::string name, cochain;
    std::vector<std::tuple<SimplexId, long, Rational>> entries;
    int line;
  };
  std::optional<PendingDist> pdist;
  std::vector<SimplexId> sub_generators;

  auto ensure_space = [&](int at_line) {
    if (!space_built) {
      s.space = assemble(ps, max_dim, at_line);
      space_built = true;
    }
  };
  auto close_section = [&]() {
    if (mode == Mode::Distribution && pdist) {
      const auto& tw = s.twisting(pdist->cochain);
      TwistedDistribution d(tw);
      for (auto& [sid, outcome, wr] : pdist->entries)
        d.at(sid).w[outcome] += wr;
      for (int dd = 1; dd <= s.space->max_dim(); ++dd)
        for (int i = 0; i < s.space->count(dd); ++i)
          if (d.at(SimplexId{dd, i}).sum() != 1)
            throw ParseError(pdist->line, "distribution '" + pdist->name +
                                              "' does not sum to 1 on " +
                                              s.space->name(SimplexId{dd, i}));
      s.distribution_order.push_back(pdist->name);
      s.distributions.emplace(pdist->name,
                              Scenario::NamedDistribution{pdist->cochain, d});
      pdist.reset();
    }
    if (mode == Mode::Subcomplex && !current.empty()) {
      s.subcomplex_order.push_back(current);
      s.subcomplexes.emplace(current,
                             SubComplex::closure(s.space, sub_generators));
      sub_generators.clear();
    }
    if (mode == Mode::Pauli && !current.empty()) {
      const auto& A = s.paulis.at(current);
      for (int e = 0; e < s.space->count(1); ++e)
        if (e >= static_cast<int>(A.on_edge.size()) || A.on_edge[e].letters.empty())
          throw ParseError(section_line, "pauli '" + current + "' leaves edge '" +
                                             s.space->name(SimplexId{1, e}) +
                                             "' unassigned");
    }
    current.clear();
  };

  auto find_simplex = [&](const std::string& name, int at_line) {
    for (int d = 0; d <= s.space->max_dim(); ++d)
      if (auto id = s.space->find(d, name)) return *id;
    throw ParseError(at_line, "unknown simplex '" + name + "'");
  };

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    while (!line.empty() && isspace(static_cast<unsigned char>(line.back())))
      line.pop_back();
    size_t start = 0;
    while (start < line.size() && isspace(static_cast<unsigned char>(line[start])))
      ++start;
    line = line.substr(start);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_no, "unterminated section header");
      SectionHeader h = parse_header(line.substr(1, line.size() - 2), line_no);
      close_section();
      section_line = line_no;
      if (h.kind == "scenario") {
        if (h.words.size() != 1) throw ParseError(line_no, "[scenario] needs a name");
        s.name = h.words[0];
        mode = Mode::None;
      } else if (h.kind == "vertices") {
        mode = Mode::Vertices;
      } else if (h.kind == "edges") {
        mode = Mode::Edges;
      } else if (h.kind == "triangles") {
        mode = Mode::Triangles;
      } else if (h.kind == "tetrahedra") {
        mode = Mode::Tetrahedra;
      } else if (h.kind == "cochain") {
        ensure_space(line_no);
        if (h.words.size() != 1 || !h.kv.count("deg") || !h.kv.count("group"))
          throw ParseError(line_no, "[cochain <name> deg=<k> group=<spec>]");
        current = h.words[0];
        int deg = std::stoi(h.kv.at("deg"));
        if (deg < 0 || deg > s.space->max_dim())
          throw ParseError(line_no, "cochain degree out of range");
        FiniteAbelianGroup H = FiniteAbelianGroup::parse_spec(h.kv.at("group"));
        if (!s.cochains.emplace(current, Cochain(s.space, H, deg)).second)
          throw ParseError(line_no, "duplicate cochain '" + current + "'");
        s.cochain_order.push_back(current);
        mode = Mode::Cochain;
      } else if (h.kind == "pauli") {
        ensure_space(line_no);
        if (h.words.size() != 1 || !h.kv.count("qubits"))
          throw ParseError(line_no, "[pauli <name> qubits=<n>]");
        current = h.words[0];
        PauliAssignment A;
        A.space = s.space;
        A.qubits = std::stoi(h.kv.at("qubits"));
        if (A.qubits < 1 || A.qubits > 3)
          throw ParseError(line_no, "qubit count must be 1..3");
        A.on_edge.resize(s.space->count(1));
        if (!s.paulis.emplace(current, std::move(A)).second)
          throw ParseError(line_no, "duplicate pauli '" + current + "'");
        s.pauli_order.push_back(current);
        mode = Mode::Pauli;
      } else if (h.kind == "distribution") {
        ensure_space(line_no);
        if (h.words.size() != 3 || h.words[1] != "over")
          throw ParseError(line_no,
                           "[distribution <name> over <scenario>:<cochain>]");
        auto colon = h.words[2].find(':');
        if (colon == std::string::npos)
          throw ParseError(line_no, "expected <scenario>:<cochain>");
        std::string scn = h.words[2].substr(0, colon);
        std::string coc = h.words[2].substr(colon + 1);
        if (scn != s.name)
          throw ParseError(line_no, "distribution refers to scenario '" + scn +
                                        "' but this file is '" + s.name + "'");
        if (!s.cochains.count(coc))
          throw ParseError(line_no, "unknown cochain '" + coc + "'");
        pdist = PendingDist{h.words[0], coc, {}, line_no};
        mode = Mode::Distribution;
      } else if (h.kind == "subcomplex") {
        ensure_space(line_no);
        if (h.words.size() != 1) throw ParseError(line_no, "[subcomplex <name>]");
        current = h.words[0];
        if (s.subcomplexes.count(current))
          throw ParseError(line_no, "duplicate subcomplex '" + current + "'");
        mode = Mode::Subcomplex;
      } else if (h.kind == "symmetry") {
        ensure_space(line_no);
        if (h.words.size() != 1 || !h.kv.count("cochain"))
          throw ParseError(line_no,
                           "[symmetry <name> cochain=<c> shift=<c1 or 0>]");
        Scenario::SymmetryDecl decl;
        decl.name = h.words[0];
        decl.cochain = h.kv.at("cochain");
        if (h.kv.count("shift") && h.kv.at("shift") != "0")
          decl.shift = h.kv.at("shift");
        if (!s.cochains.count(decl.cochain))
          throw ParseError(line_no, "unknown cochain '" + decl.cochain + "'");
        if (!decl.shift.empty()) {
          if (!s.cochains.count(decl.shift))
            throw ParseError(line_no, "unknown shift cochain '" + decl.shift + "'");
          if (s.cochain(decl.shift).degree() != 1)
            throw ParseError(line_no, "shift cochain must have degree 1");
        }
        s.symmetries.push_back(decl);
        current = decl.name;
        mode = Mode::Symmetry;
      } else {
        throw ParseError(line_no, "unknown section [" + h.kind + "]");
      }
      continue;
    }

    switch (mode) {
      case Mode::None:
        throw ParseError(line_no, "content outside of any section");
      case Mode::Vertices:
        for (const auto& t : split_ws(line)) {
          ps.vertices.push_back(t);
          ps.decl_line[t] = line_no;
        }
        break;
      case Mode::Edges:
      case Mode::Triangles:
      case Mode::Tetrahedra: {
        if (space_built)
          throw ParseError(line_no, "simplices must precede named sections");
        auto toks = split_ws(line);
        if (toks.empty()) break;
        std::string name = toks[0];
        std::vector<std::string> rest(toks.begin() + 1, toks.end());
        ps.decl_line[name] = line_no;
        if (mode == Mode::Edges) {
          if (rest.size() != 2)
            throw ParseError(line_no, "[edges] lines read: name src dst");
          // src = d1, dst = d0
          ps.edges.emplace_back(name,
                                std::vector<std::string>{rest[1], rest[0]});
        } else if (mode == Mode::Triangles) {
          if (rest.size() != 3)
            throw ParseError(line_no, "[triangles] lines read: name e12 e02 e01");
          ps.triangles.emplace_back(name, rest);
        } else {
          if (rest.size() != 4)
            throw ParseError(line_no,
                             "[tetrahedra] lines read: name f123 f023 f013 f012");
          ps.tetrahedra.emplace_back(name, rest);
        }
        break;
      }
      case Mode::Cochain: {
        auto eq = line.find('=');
        if (eq == std::string::npos)
          throw ParseError(line_no, "cochain lines read: simplex=value");
        std::string sn = line.substr(0, eq);
        Cochain& c = s.cochains.at(current);
        auto id = s.space->find(c.degree(), sn);
        if (!id)
          throw ParseError(line_no, "unknown " + std::to_string(c.degree()) +
                                        "-simplex '" + sn + "'");
        c.set(*id, c.group().parse_elem(line.substr(eq + 1)));
        break;
      }
      case Mode::Pauli: {
        auto eq = line.find('=');
        if (eq == std::string::npos)
          throw ParseError(line_no, "pauli lines read: edge=word");
        std::string en = line.substr(0, eq);
        auto id = s.space->find(1, en);
        if (!id) throw ParseError(line_no, "unknown edge '" + en + "'");
        PauliAssignment& A = s.paulis.at(current);
        try {
          A.on_edge[id->index] = parse_pauli_word(line.substr(eq + 1), A.qubits);
        } catch (const std::exception& ex) {
          throw ParseError(line_no, ex.what());
        }
        break;
      }
      case Mode::Distribution: {
        auto toks = split_ws(line);
        if (toks.size() != 3)
          throw ParseError(line_no,
                           "distribution lines read: simplex outcome weight");
        SimplexId sid = find_simplex(toks[0], line_no);
        if (sid.dim < 1)
          throw ParseError(line_no, "distribution entries live on dimension >= 1");
        const auto& H = s.cochain(pdist->cochain).group();
        long outcome;
        try {
          outcome = H.tuple_index(H.parse_tuple(toks[1], sid.dim));
        } catch (const std::exception& ex) {
          throw ParseError(line_no, ex.what());
        }
        pdist->entries.emplace_back(sid, outcome, parse_rational(toks[2]));
        break;
      }
      case Mode::Subcomplex:
        for (const auto& t : split_ws(line))
          sub_generators.push_back(find_simplex(t, line_no));
        break;
      case Mode::Symmetry: {
        for (const auto& t : split_ws(line)) {
          auto eq = t.find('=');
          if (eq == std::string::npos)
            throw ParseError(line_no, "symmetry lines read: edge=edge ...");
          std::string from = t.substr(0, eq), to = t.substr(eq + 1);
          if (!s.space->find(1, from) || !s.space->find(1, to))
            throw ParseError(line_no, "unknown edge in '" + t + "'");
          s.symmetries.back().edge_map[from] = to;
        }
        break;
      }
    }
  }
  close_section();
  ensure_space(line_no);
  return s;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string stem = path;
  auto slash = stem.find_last_of('/');
  if (slash != std::string::npos) stem = stem.substr(slash + 1);
  auto dot = stem.rfind('.');
  if (dot != std::string::npos) stem = stem.substr(0, dot);
  Scenario s = parse_scenario_text(buf.str(), stem);
  s.source_path = path;
  return s;
}

namespace {

std::string face_token(const SimplicialSet& X, const EZForm& e) {
  std::ostringstream os;
  for (auto it = e.degens.rbegin(); it != e.degens.rend(); ++it)
    os << "s" << *it << ".";
  os << X.name(e.base);
  return os.str();
}

}  // namespace

std::string serialize_scenario(const Scenario& s) {
  const auto& X = *s.space;
  std::ostringstream os;
  os << "[scenario " << s.name << "]\n";
  os << "[vertices]\n";
  for (int i = 0; i < X.count(0); ++i) os << (i ? " " : "") << X.name(SimplexId{0, i});
  os << "\n";
  if (X.count(1)) {
    os << "[edges]\n";
    for (int i = 0; i < X.count(1); ++i) {
      SimplexId e{1, i};
      os << X.name(e) << " " << face_token(X, X.face(e, 1)) << " "
         << face_token(X, X.face(e, 0)) << "\n";
    }
  }
  if (X.max_dim() >= 2 && X.count(2)) {
    os << "[triangles]\n";
    for (int i = 0; i < X.count(2); ++i) {
      SimplexId t{2, i};
      os << X.name(t);
      for (int k = 0; k <= 2; ++k) os << " " << face_token(X, X.face(t, k));
      os << "\n";
    }
  }
  if (X.max_dim() >= 3 && X.count(3)) {
    os << "[tetrahedra]\n";
    for (int i = 0; i < X.count(3); ++i) {
      SimplexId t{3, i};
      os << X.name(t);
      for (int k = 0; k <= 3; ++k) os << " " << face_token(X, X.face(t, k));
      os << "\n";
    }
  }
  for (const auto& cn : s.cochain_order) {
    const Cochain& c = s.cochains.at(cn);
    os << "[cochain " << cn << " deg=" << c.degree()
       << " group=" << c.group().spec() << "]\n";
    for (int i = 0; i < X.count(c.degree()); ++i)
      if (!c.group().is_zero(c.value(i)))
        os << X.name(SimplexId{c.degree(), i}) << "="
           << c.group().elem_str(c.value(i)) << "\n";
  }
  for (const auto& pn : s.pauli_order) {
    const PauliAssignment& A = s.paulis.at(pn);
    os << "[pauli " << pn << " qubits=" << A.qubits << "]\n";
    for (int i = 0; i < X.count(1); ++i)
      os << X.name(SimplexId{1, i}) << "=" << A.on_edge[i].str() << "\n";
  }
  for (const auto& sn : s.subcomplex_order) {
    const SubComplex& Z = s.subcomplexes.at(sn);
    os << "[subcomplex " << sn << "]\n";
    bool first = true;
    for (int d = X.max_dim(); d >= 0; --d)
      for (int i = 0; i < X.count(d); ++i)
        if (Z.member[d][i]) {
          os << (first ? "" : " ") << X.name(SimplexId{d, i});
          first = false;
        }
    os << "\n";
  }
  for (const auto& dn : s.distribution_order) {
    const auto& nd = s.distributions.at(dn);
    os << serialize_distribution(s, dn, nd.over_cochain, nd.dist);
  }
  for (const auto& sym : s.symmetries) {
    os << "[symmetry " << sym.name << " cochain=" << sym.cochain
       << " shift=" << (sym.shift.empty() ? "0" : sym.shift) << "]\n";
    bool first = true;
    for (const auto& [from, to] : sym.edge_map) {
      os << (first ? "" : " ") << from << "=" << to;
      first = false;
    }
    os << "\n";
  }
  return os.str();
}

std::string serialize_distribution(const Scenario& s, const std::string& name,
                                   const std::string& over_cochain,
                                   const TwistedDistribution& p) {
  const auto& X = *s.space;
  const auto& H = p.group();
  std::ostringstream os;
  os << "[distribution " << name << " over " << s.name << ":" << over_cochain
     << "]\n";
  for (int d = 1; d <= X.max_dim(); ++d)
    for (int i = 0; i < X.count(d); ++i) {
      const auto& v = p.at(SimplexId{d, i});
      for (long t = 0; t < static_cast<long>(v.w.size()); ++t)
        if (v.w[t] != 0)
          os << X.name(SimplexId{d, i}) << " " << H.tuple_str(H.tuple_at(d, t))
             << " " << to_string(v.w[t]) << "\n";
    }
  return os.str();
}

std::vector<CoordinateSymmetry> coordinate_symmetries(const Scenario& s,
                                                      const std::string& cochain,
                                                      const PolytopeH& P) {
  const auto& X = *s.space;
  const Cochain& beta = s.cochain(cochain);
  const auto& H = beta.group();
  for (int m : H.moduli())
    if (m != 2)
      throw std::runtime_error(
          "symmetry actions are implemented for exponent-2 groups");
  // Labeling actions need every maximal simplex to be a triangle with three
  // distinct non-degenerate edges.
  for (SimplexId m : P.maximal) {
    if (m.dim != 2)
      throw std::runtime_error("symmetry actions need a pure 2-dimensional scenario");
    std::set<int> edges;
    for (int i = 0; i <= 2; ++i) {
      const EZForm& f = X.face(m, i);
      if (f.is_degenerate())
        throw std::runtime_error("symmetry actions need non-degenerate faces");
      edges.insert(f.base.index);
    }
    if (edges.size() != 3)
      throw std::runtime_error(
          "symmetry actions need three distinct edges per context");
  }

  std::vector<CoordinateSymmetry> out;
  for (const auto& decl : s.symmetries) {
    if (decl.cochain != cochain) continue;
    // Edge permutation; unlisted edges stay fixed.
    std::vector<int> eperm(X.count(1));
    for (int i = 0; i < X.count(1); ++i) eperm[i] = i;
    for (const auto& [from, to] : decl.edge_map)
      eperm[X.find(1, from)->index] = X.find(1, to)->index;
    {
      std::set<int> image(eperm.begin(), eperm.end());
      if (static_cast<int>(image.size()) != X.count(1))
        throw std::runtime_error("symmetry '" + decl.name +
                                 "' is not an edge bijection");
    }
    Cochain kappa = decl.shift.empty() ? Cochain(s.space, H, 1)
                                       : s.cochain(decl.shift);

    // Triangle images by edge sets, with the cocycle-shift condition.
    std::vector<int> tperm(X.count(2), -1);
    for (int t = 0; t < X.count(2); ++t) {
      std::array<int, 3> img;
      GroupElem shift = H.zero();
      for (int i = 0; i <= 2; ++i) {
        int e = X.face(SimplexId{2, t}, i).base.index;
        img[i] = eperm[e];
        shift = H.add(shift, kappa.value(e));
      }
      std::sort(img.begin(), img.end());
      for (int t2 = 0; t2 < X.count(2); ++t2) {
        std::array<int, 3> have;
        for (int i = 0; i <= 2; ++i) have[i] = X.face(SimplexId{2, t2}, i).base.index;
        std::sort(have.begin(), have.end());
        if (have == img) {
          tperm[t] = t2;
          break;
        }
      }
      if (tperm[t] < 0)
        throw std::runtime_error("symmetry '" + decl.name +
                                 "' does not map context " +
                                 X.name(SimplexId{2, t}) + " to a context");
      if (!(beta.value(tperm[t]) == H.add(beta.value(t), shift)))
        throw std::runtime_error(
            "symmetry '" + decl.name + "' violates the cocycle condition at " +
            X.name(SimplexId{2, t}));
    }

    CoordinateSymmetry cs;
    cs.name = decl.name;
    cs.perm.assign(P.coords.size(), -1);
    for (int t = 0; t < X.count(2); ++t) {
      int t2 = tperm[t];
      SimplexId src{2, t}, dst{2, t2};
      std::array<int, 3> se, de;
      for (int i = 0; i <= 2; ++i) {
        se[i] = X.face(src, i).base.index;
        de[i] = X.face(dst, i).base.index;
      }
      for (long o2 = 0; o2 < H.tuple_count(2); ++o2) {
        NerveTuple tup2 = H.tuple_at(2, o2);
        // Labeling of the target context from its fiber coordinates.
        std::map<int, GroupElem> lab2;
        lab2[de[2]] = tup2[0];
        lab2[de[0]] = H.add(tup2[1], beta.value(t2));
        lab2[de[1]] = H.add(tup2[0], tup2[1]);
        // Transport back: l(e) = l'(pi(e)) + kappa(e)  (exponent 2).
        auto lab = [&](int e) { return H.add(lab2.at(eperm[e]), kappa.value(e)); };
        GroupElem h1 = lab(se[2]);
        GroupElem h2 = H.add(lab(se[0]), beta.value(t));
        if (!(lab(se[1]) == H.add(h1, h2)))
          throw std::logic_error("labeling transport is inconsistent");
        cs.perm[P.column(dst, o2)] = P.column(src, H.tuple_index({h1, h2}));
      }
    }
    out.push_back(std::move(cs));
  }
  return out;
}

Scenario quotient_scenario(const Scenario& s, const std::string& subcomplex,
                           const std::string& cochain) {
  auto it = s.subcomplexes.find(subcomplex);
  if (it == s.subcomplexes.end())
    throw std::runtime_error("unknown subcomplex '" + subcomplex + "'");
  CollapseContext ctx = make_collapse(s.twisting(cochain), it->second);
  Scenario out;
  out.name = s.name + "_mod_" + subcomplex;
  out.space = ctx.quot.built.space;
  std::string cname = cochain + "_collapsed";
  out.cochain_order.push_back(cname);
  out.cochains.emplace(cname, ctx.collapsed->cocycle());
  return out;
}

}  // namespace twistlab
