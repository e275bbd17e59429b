// twistlab: build twisted distribution polytopes from scenario files, decide
// contextuality by exact linear programming, enumerate vertices, and check
// quantum realizations.
//
// Exit codes: 0 = success / affirmative answer, 1 = negative answer
// (contextual, no sections, empty polytope), 2 = usage or validation error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "twistlab/reduce.hpp"
#include "twistlab/scenario.hpp"

using nlohmann::json;
using namespace twistlab;

namespace {

enum class Format { Table, Csv, JsonLines };

struct Options {
  Format format = Format::Table;
  int jobs = 1;
};

void emit_schema_header(const Options& opt, const std::string& command) {
  if (opt.format == Format::JsonLines)
    std::cout << json{{"schema", 1}, {"command", command}}.dump() << "\n";
}

std::string coord_label(const Scenario& s, const PolytopeH& P, long j) {
  const auto& c = P.coords[j];
  const auto& H = P.twisting->group();
  return s.space->name(c.simplex) + ":" +
         H.tuple_str(H.tuple_at(c.simplex.dim, c.outcome));
}

std::string csv_cell(const std::string& v) {
  if (v.find(',') == std::string::npos && v.find('"') == std::string::npos)
    return v;
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string alpha_summary(const Scenario& s, const Cochain& a) {
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < s.space->count(1); ++i) {
    if (a.group().is_zero(a.value(i))) continue;
    os << (first ? "" : " ") << s.space->name(SimplexId{1, i}) << "="
       << a.group().elem_str(a.value(i));
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

QuantumState parse_state_spec(const std::string& spec, int qubits) {
  if (spec == "maximally-mixed" || spec.empty()) return maximally_mixed(qubits);
  if (spec.rfind("stabilizer:", 0) == 0) {
    std::vector<std::string> gens;
    std::string rest = spec.substr(11);
    size_t pos = 0;
    while (pos <= rest.size()) {
      size_t comma = rest.find(',', pos);
      gens.push_back(rest.substr(pos, comma == std::string::npos ? comma
                                                                 : comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return stabilizer_state(gens, qubits);
  }
  if (spec.rfind("file:", 0) == 0) {
    std::ifstream in(spec.substr(5));
    if (!in) throw std::runtime_error("cannot open state file " + spec.substr(5));
    long n;
    in >> n;
    if (n != (1L << qubits))
      throw std::runtime_error("state matrix dimension does not match qubits");
    CMatrix rho = CMatrix::zero(n);
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) {
        std::string tok;
        if (!(in >> tok)) throw std::runtime_error("state matrix is truncated");
        auto colon = tok.find(':');
        if (colon == std::string::npos)
          rho.at(i, j) = CRat(parse_rational(tok));
        else
          rho.at(i, j) = CRat(parse_rational(tok.substr(0, colon)),
                              parse_rational(tok.substr(colon + 1)));
      }
    return state_from_matrix(rho, spec);
  }
  throw std::runtime_error("unknown --state spec: " + spec);
}

const PauliAssignment& pick_pauli(const Scenario& s, const std::string& name) {
  if (!name.empty()) {
    auto it = s.paulis.find(name);
    if (it == s.paulis.end())
      throw std::runtime_error("unknown pauli assignment '" + name + "'");
    return it->second;
  }
  if (s.paulis.size() != 1)
    throw std::runtime_error("scenario has " + std::to_string(s.paulis.size()) +
                             " pauli assignments; pick one with --pauli");
  return s.paulis.begin()->second;
}

TwistedDistribution resolve_distribution(const Scenario& s,
                                         const std::string& cochain,
                                         const std::string& dist,
                                         const std::string& pauli,
                                         const std::string& state) {
  if (dist == "born") {
    const PauliAssignment& A = pick_pauli(s, pauli);
    QuantumState rho = parse_state_spec(state, A.qubits);
    TwistedDistribution p = born_distribution(A, rho);
    if (!(p.twisting()->cocycle() == s.cochain(cochain))) {
      bool cohom =
          solve_trivialization(p.twisting()->cocycle() - s.cochain(cochain))
              .has_value();
      throw std::runtime_error(
          "the context cocycle of the assignment differs from '" + cochain +
          "' (" + (cohom ? "cohomologous but not equal" : "different class") +
          ")");
    }
    // Rebuild over the scenario's twisting object so downstream comparisons
    // share the same cocycle instance.
    TwistedDistribution q(s.twisting(cochain));
    for (int d = 1; d <= s.space->max_dim(); ++d)
      for (int i = 0; i < s.space->count(d); ++i)
        q.at(SimplexId{d, i}) = p.at(SimplexId{d, i});
    return q;
  }
  auto it = s.distributions.find(dist);
  if (it == s.distributions.end())
    throw std::runtime_error("unknown distribution '" + dist + "'");
  if (it->second.over_cochain != cochain)
    throw std::runtime_error("distribution '" + dist + "' lives over cochain '" +
                             it->second.over_cochain + "', not '" + cochain + "'");
  return it->second.dist;
}

int cmd_check(const Scenario& s, const Options& opt) {
  emit_schema_header(opt, "check");
  int failures = 0;
  auto line = [&](const std::string& what, const CheckReport& rep) {
    if (opt.format == Format::JsonLines) {
      std::cout << json{{"check", what},
                        {"ok", rep.ok},
                        {"checks", rep.checks},
                        {"violation", rep.first_violation}}
                       .dump()
                << "\n";
    } else {
      std::cout << (rep.ok ? "ok   " : "FAIL ") << what << " (" << rep.checks
                << " identities)";
      if (!rep.ok) std::cout << ": " << rep.first_violation;
      std::cout << "\n";
    }
    if (!rep.ok) ++failures;
  };
  line("simplicial identities", check_simplicial(*s.space));
  for (const auto& cn : s.cochain_order) {
    const Cochain& c = s.cochains.at(cn);
    if (c.degree() != 2) continue;
    CheckReport rep;
    rep.count();
    if (!is_cocycle(c)) rep.fail("coboundary of '" + cn + "' is nonzero");
    line("cochain " + cn + " is a cocycle", rep);
    if (rep.ok) line("twisting identities for " + cn, s.twisting(cn)->verify());
  }
  for (const auto& pn : s.pauli_order) {
    CheckReport rep;
    rep.count();
    try {
      context_cocycle(s.paulis.at(pn));
    } catch (const std::exception& ex) {
      rep.fail(ex.what());
    }
    line("pauli " + pn + " contexts", rep);
  }
  for (const auto& dn : s.distribution_order) {
    line("distribution " + dn, validate(s.distributions.at(dn).dist));
  }
  for (const auto& zn : s.subcomplex_order) {
    CheckReport rep;
    rep.count();
    if (!s.subcomplexes.at(zn).is_face_closed())
      rep.fail("subcomplex '" + zn + "' is not face-closed");
    line("subcomplex " + zn, rep);
  }
  {
    std::set<std::string> sym_cochains;
    for (const auto& d : s.symmetries) sym_cochains.insert(d.cochain);
    for (const auto& cn : sym_cochains) {
      CheckReport rep;
      rep.count();
      try {
        PolytopeH P = build_hrep(s.twisting(cn));
        coordinate_symmetries(s, cn, P);
      } catch (const std::exception& ex) {
        rep.fail(ex.what());
      }
      line("symmetries over " + cn, rep);
    }
  }
  return failures == 0 ? 0 : 1;
}

int cmd_sections(const Scenario& s, const std::string& cochain,
                 const Options& opt) {
  emit_schema_header(opt, "sections");
  auto secs = sections(s.twisting(cochain));
  if (opt.format == Format::JsonLines) {
    std::cout << json{{"count", secs.size()}}.dump() << "\n";
    for (size_t i = 0; i < secs.size(); ++i) {
      json a;
      for (int e = 0; e < s.space->count(1); ++e)
        a[s.space->name(SimplexId{1, e})] =
            secs[i].alpha().group().elem_str(secs[i].alpha().value(e));
      std::cout << json{{"section", i}, {"alpha", a}}.dump() << "\n";
    }
  } else if (opt.format == Format::Csv) {
    std::cout << "section,alpha\n";
    for (size_t i = 0; i < secs.size(); ++i)
      std::cout << i << ",\"" << alpha_summary(s, secs[i].alpha()) << "\"\n";
  } else {
    std::cout << secs.size() << " sections\n";
    for (size_t i = 0; i < secs.size(); ++i)
      std::cout << "  [" << i << "] " << alpha_summary(s, secs[i].alpha()) << "\n";
  }
  return secs.empty() ? 1 : 0;
}

int cmd_hrep(const Scenario& s, const std::string& cochain, const Options& opt) {
  PolytopeH P = build_hrep(s.twisting(cochain));
  emit_schema_header(opt, "hrep");
  if (opt.format == Format::JsonLines) {
    json cols = json::array();
    for (size_t j = 0; j < P.coords.size(); ++j)
      cols.push_back(coord_label(s, P, static_cast<long>(j)));
    std::cout << json{{"columns", cols}, {"dim", P.dim()}}.dump() << "\n";
    for (size_t r = 0; r < P.A.size(); ++r) {
      json terms;
      for (size_t j = 0; j < P.coords.size(); ++j)
        if (P.A[r][j] != 0)
          terms[coord_label(s, P, static_cast<long>(j))] = to_string(P.A[r][j]);
      std::cout << json{{"row", P.row_label[r]},
                        {"terms", terms},
                        {"rhs", to_string(P.b[r])}}
                       .dump()
                << "\n";
    }
  } else {
    std::cout << P.coords.size() << " coordinates, " << P.A.size()
              << " equality rows, affine dimension " << P.dim()
              << ", nonnegativity on every coordinate\n";
    for (size_t r = 0; r < P.A.size(); ++r) {
      std::cout << P.row_label[r] << ": ";
      bool first = true;
      for (size_t j = 0; j < P.coords.size(); ++j) {
        if (P.A[r][j] == 0) continue;
        std::cout << (first ? "" : " + ");
        if (P.A[r][j] != 1) std::cout << to_string(P.A[r][j]) << "*";
        std::cout << "p[" << coord_label(s, P, static_cast<long>(j)) << "]";
        first = false;
      }
      std::cout << " = " << to_string(P.b[r]) << "\n";
    }
  }
  return 0;
}

int cmd_vertices(const Scenario& s, const std::string& cochain, bool orbits,
                 const Options& opt) {
  PolytopeH P = build_hrep(s.twisting(cochain));
  VertexEnumeration V = enumerate_vertices(P, 200000, opt.jobs);
  if (V.empty_polytope) {
    emit_schema_header(opt, "vertices");
    std::cout << (opt.format == Format::JsonLines
                      ? json{{"empty", true}}.dump()
                      : "the polytope is empty (contradictory constraints)")
              << "\n";
    return 1;
  }
  if (!V.complete) {
    std::cerr << "warning: ray cap reached; vertex list is partial\n";
    return 2;
  }
  std::vector<int> orb;
  if (orbits)
    orb = vertex_orbits(V.vertices, coordinate_symmetries(s, cochain, P));

  emit_schema_header(opt, "vertices");
  if (opt.format == Format::Csv) {
    std::cout << "vertex";
    if (orbits) std::cout << ",orbit";
    for (size_t j = 0; j < P.coords.size(); ++j)
      std::cout << "," << csv_cell(coord_label(s, P, static_cast<long>(j)));
    std::cout << "\n";
    for (size_t i = 0; i < V.vertices.size(); ++i) {
      std::cout << i;
      if (orbits) std::cout << "," << orb[i];
      for (const auto& x : V.vertices[i]) std::cout << "," << to_string(x);
      std::cout << "\n";
    }
  } else if (opt.format == Format::JsonLines) {
    for (size_t i = 0; i < V.vertices.size(); ++i) {
      json coords;
      for (size_t j = 0; j < P.coords.size(); ++j)
        if (V.vertices[i][j] != 0)
          coords[coord_label(s, P, static_cast<long>(j))] =
              to_string(V.vertices[i][j]);
      json row{{"vertex", i}, {"coords", coords}};
      if (orbits) row["orbit"] = orb[i];
      std::cout << row.dump() << "\n";
    }
  } else {
    std::cout << V.vertices.size() << " vertices\n";
    for (size_t i = 0; i < V.vertices.size(); ++i) {
      std::cout << "[" << i << "]";
      if (orbits) std::cout << " orbit " << orb[i];
      for (size_t j = 0; j < P.coords.size(); ++j)
        if (V.vertices[i][j] != 0)
          std::cout << " " << coord_label(s, P, static_cast<long>(j)) << "="
                    << to_string(V.vertices[i][j]);
      std::cout << "\n";
    }
  }
  return 0;
}

void print_certificate(const Scenario& s, const ClassicalCertificate& cert,
                       const Options& opt) {
  for (size_t k = 0; k < cert.sections.size(); ++k) {
    if (cert.lambda[k] == 0) continue;
    if (opt.format == Format::JsonLines)
      std::cout << json{{"weight", to_string(cert.lambda[k])},
                        {"alpha", alpha_summary(s, cert.sections[k].alpha())}}
                       .dump()
                << "\n";
    else
      std::cout << "  " << to_string(cert.lambda[k]) << " * delta("
                << alpha_summary(s, cert.sections[k].alpha()) << ")\n";
  }
}

int report_verdict(const Scenario& s, const ContextualityVerdict& v,
                   const Options& opt, const std::string& command) {
  emit_schema_header(opt, command);
  if (v.certificate) {
    if (opt.format == Format::JsonLines)
      std::cout << json{{"noncontextual", true}}.dump() << "\n";
    else
      std::cout << "noncontextual; classical certificate:\n";
    print_certificate(s, *v.certificate, opt);
    return 0;
  }
  if (opt.format == Format::JsonLines)
    std::cout << json{{"noncontextual", false}, {"reason", v.reason}}.dump()
              << "\n";
  else
    std::cout << "contextual; reason: " << v.reason << "\n";
  return 1;
}

int cmd_collapse(const Scenario& s, const std::string& sub,
                 const std::string& cochain) {
  Scenario q = quotient_scenario(s, sub, cochain);
  std::cout << serialize_scenario(q);
  return 0;
}

int cmd_convolve(const Scenario& s, const std::string& d1, const std::string& d2,
                 const Options& opt) {
  auto i1 = s.distributions.find(d1), i2 = s.distributions.find(d2);
  if (i1 == s.distributions.end() || i2 == s.distributions.end())
    throw std::runtime_error("unknown distribution name");
  TwistedDistribution r = convolve(i1->second.dist, i2->second.dist);
  emit_schema_header(opt, "convolve");
  const Cochain& c = r.twisting()->cocycle();
  std::string cname = i1->second.over_cochain + "+" + i2->second.over_cochain;
  std::cout << "[cochain " << cname << " deg=2 group=" << c.group().spec()
            << "]\n";
  for (int i = 0; i < s.space->count(2); ++i)
    if (!c.group().is_zero(c.value(i)))
      std::cout << s.space->name(SimplexId{2, i}) << "="
                << c.group().elem_str(c.value(i)) << "\n";
  std::cout << serialize_distribution(s, d1 + "*" + d2, cname, r);
  return 0;
}

int cmd_quantum(const Scenario& s, const std::string& pauli,
                const std::string& state, const Options& opt) {
  const PauliAssignment& A = pick_pauli(s, pauli);
  QuantumState rho = parse_state_spec(state, A.qubits);
  Cochain eps = context_cocycle(A);
  TwistedDistribution p = born_distribution(A, rho);
  emit_schema_header(opt, "quantum");
  if (opt.format == Format::JsonLines) {
    json signs;
    for (int i = 0; i < s.space->count(2); ++i)
      signs[s.space->name(SimplexId{2, i})] = eps.value(i)[0];
    std::cout << json{{"state", rho.description},
                      {"context-cocycle", signs},
                      {"exact", true}}
                     .dump()
              << "\n";
  } else {
    std::cout << "state: " << rho.description << "\nexact: yes\ncontext cocycle:";
    for (int i = 0; i < s.space->count(2); ++i)
      std::cout << " " << s.space->name(SimplexId{2, i}) << "="
                << eps.value(i)[0];
    std::cout << "\n";
  }
  std::cout << serialize_distribution(s, "born", "context-cocycle", p);
  CheckReport rep = validate(p);
  if (!rep.ok) {
    std::cerr << "validation failed: " << rep.first_violation << "\n";
    return 2;
  }
  if (opt.format != Format::JsonLines) std::cout << "validates: yes\n";
  return 0;
}

int cmd_equivariant(const Scenario& s, const std::string& dist,
                    const Options& opt) {
  auto it = s.distributions.find(dist);
  if (it == s.distributions.end())
    throw std::runtime_error("unknown distribution '" + dist + "'");
  const TwistedDistribution& p = it->second.dist;
  EquivariantDistribution q = to_equivariant(p);
  CheckReport rep = validate_equivariant(q);
  bool round_trip = from_equivariant(q) == p;
  emit_schema_header(opt, "equivariant");
  const auto& F = *q.carrier.total.space;
  const auto& H = q.carrier.twisting->group();
  if (opt.format == Format::JsonLines) {
    std::cout << json{{"equivariant-ok", rep.ok}, {"round-trip", round_trip}}
                     .dump()
              << "\n";
    for (int d = 1; d <= F.max_dim(); ++d)
      for (int i = 0; i < F.count(d); ++i) {
        json w;
        for (long t = 0; t < static_cast<long>(q.q[d][i].w.size()); ++t)
          if (q.q[d][i].w[t] != 0)
            w[H.tuple_str(H.tuple_at(d, t))] = to_string(q.q[d][i].w[t]);
        std::cout << json{{"simplex", F.name(SimplexId{d, i})}, {"weights", w}}
                         .dump()
                  << "\n";
      }
  } else {
    std::cout << "equivariance: " << (rep.ok ? "ok" : rep.first_violation)
              << "\nround trip: " << (round_trip ? "identity" : "BROKEN") << "\n";
    for (int d = 1; d <= F.max_dim(); ++d)
      for (int i = 0; i < F.count(d); ++i) {
        std::cout << F.name(SimplexId{d, i}) << ":";
        for (long t = 0; t < static_cast<long>(q.q[d][i].w.size()); ++t)
          if (q.q[d][i].w[t] != 0)
            std::cout << " " << H.tuple_str(H.tuple_at(d, t)) << "="
                      << to_string(q.q[d][i].w[t]);
        std::cout << "\n";
      }
  }
  return rep.ok && round_trip ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twisted simplicial distributions toolkit"};
  app.require_subcommand(1);
  Options opt;
  std::map<std::string, Format> fmap{{"table", Format::Table},
                                     {"csv", Format::Csv},
                                     {"json-lines", Format::JsonLines}};
  app.add_option("--format", opt.format, "output format")
      ->transform(CLI::CheckedTransformer(fmap, CLI::ignore_case));
  app.add_option("--jobs", opt.jobs, "worker threads for parallel phases")
      ->check(CLI::Range(1, 64));

  std::string file, cochain, dist, sub, pauli, state = "maximally-mixed", d1, d2;
  bool orbits = false;

  auto* c_check = app.add_subcommand("check", "verify a scenario file");
  c_check->add_option("file", file)->required();

  auto* c_sections = app.add_subcommand("sections", "enumerate bundle sections");
  c_sections->add_option("file", file)->required();
  c_sections->add_option("cochain", cochain)->required();

  auto* c_hrep = app.add_subcommand("hrep", "print the polytope equalities");
  c_hrep->add_option("file", file)->required();
  c_hrep->add_option("cochain", cochain)->required();

  auto* c_vertices = app.add_subcommand("vertices", "enumerate polytope vertices");
  c_vertices->add_option("file", file)->required();
  c_vertices->add_option("cochain", cochain)->required();
  c_vertices->add_flag("--orbits", orbits, "classify under declared symmetries");

  auto* c_ctx = app.add_subcommand("contextual", "decide contextuality");
  c_ctx->add_option("file", file)->required();
  c_ctx->add_option("cochain", cochain)->required();
  c_ctx->add_option("distribution", dist, "named distribution or 'born'")
      ->required();
  c_ctx->add_option("--state", state);
  c_ctx->add_option("--pauli", pauli);

  auto* c_rel = app.add_subcommand("relative-contextual",
                                   "decide contextuality after restriction");
  c_rel->add_option("file", file)->required();
  c_rel->add_option("cochain", cochain)->required();
  c_rel->add_option("distribution", dist)->required();
  c_rel->add_option("--sub", sub, "subcomplex name")->required();
  c_rel->add_option("--state", state);
  c_rel->add_option("--pauli", pauli);

  auto* c_collapse = app.add_subcommand("collapse", "emit the quotient scenario");
  c_collapse->add_option("file", file)->required();
  c_collapse->add_option("subcomplex", sub)->required();
  c_collapse->add_option("cochain", cochain)->required();

  auto* c_conv = app.add_subcommand("convolve", "convolve two distributions");
  c_conv->add_option("file", file)->required();
  c_conv->add_option("first", d1)->required();
  c_conv->add_option("second", d2)->required();

  auto* c_quantum = app.add_subcommand("quantum", "Born distribution of a state");
  c_quantum->add_option("file", file)->required();
  c_quantum->add_option("--pauli", pauli);
  c_quantum->add_option("--state", state);

  auto* c_eq = app.add_subcommand("equivariant",
                                  "equivariant form of a distribution");
  c_eq->add_option("file", file)->required();
  c_eq->add_option("distribution", dist)->required();

  for (auto* sc : app.get_subcommands({})) sc->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    Scenario s = parse_scenario_file(file);
    if (c_check->parsed()) return cmd_check(s, opt);
    if (c_sections->parsed()) return cmd_sections(s, cochain, opt);
    if (c_hrep->parsed()) return cmd_hrep(s, cochain, opt);
    if (c_vertices->parsed()) return cmd_vertices(s, cochain, orbits, opt);
    if (c_ctx->parsed()) {
      TwistedDistribution p = resolve_distribution(s, cochain, dist, pauli, state);
      CheckReport rep = validate(p);
      if (!rep.ok) {
        std::cerr << "distribution is invalid: " << rep.first_violation << "\n";
        return 2;
      }
      return report_verdict(s, is_noncontextual(p), opt, "contextual");
    }
    if (c_rel->parsed()) {
      TwistedDistribution p = resolve_distribution(s, cochain, dist, pauli, state);
      auto it = s.subcomplexes.find(sub);
      if (it == s.subcomplexes.end())
        throw std::runtime_error("unknown subcomplex '" + sub + "'");
      MaterializedSub m = materialize(it->second);
      return report_verdict(s, relative_noncontextual(p, m.inclusion), opt,
                            "relative-contextual");
    }
    if (c_collapse->parsed()) return cmd_collapse(s, sub, cochain);
    if (c_conv->parsed()) return cmd_convolve(s, d1, d2, opt);
    if (c_quantum->parsed()) return cmd_quantum(s, pauli, state, opt);
    if (c_eq->parsed()) return cmd_equivariant(s, dist, opt);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 2;
}
