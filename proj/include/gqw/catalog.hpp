#pragma once

#include <algorithm>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "gqw/factors.hpp"
#include "gqw/graph.hpp"
#include "gqw/potential.hpp"
#include "gqw/simulator.hpp"
#include "gqw/stationary.hpp"

namespace gqw {

inline std::string decimal(const Rational& x, int digits = 12) {
  std::ostringstream os;
  os << std::setprecision(digits) << to_double(x);
  return os.str();
}

inline std::string decimal(double x, int digits = 12) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

// ---------------------------------------------------------------------------
// analyze

struct RouteValue {
  std::string route;
  Rational value;
};

struct SimulationSummary {
  std::size_t steps = 0;
  std::size_t horizon = 0;
  double final_residual = 0.0;
  double distance_to_exact = 0.0;
  std::optional<std::size_t> converged_at;
  double comfortability = 0.0;
};

struct AnalyzeOptions {
  std::optional<std::size_t> simulate_steps;
  FactorMode factor_mode = FactorMode::determinant;
};

struct AnalysisReport {
  WalkInstance instance;
  BipartiteCheck bipartite;
  ArcField psi;
  std::size_t kernel_dimension = 0;
  std::vector<RouteValue> comfort_routes;
  ScatteringReport scattering;
  std::optional<FactorCounts> factors;
  AuditReport audit;
  std::vector<Vertex> constancy_violations;
  std::optional<SimulationSummary> simulation;
  std::vector<std::string> disagreements;

  bool ok() const noexcept { return disagreements.empty(); }
};

inline AnalysisReport analyze(const WalkInstance& inst, const AnalyzeOptions& opts = {}) {
  const Graph& g = inst.graph();
  const StationarySolver solver(inst);
  AnalysisReport rep{inst, bipartition(g), solver.solve(inst.inflow()), solver.kernel_dimension(), {}, {}, {}, {}, {},
                     {}, {}};
  const Rational direct = comfortability_direct(rep.psi);
  rep.comfort_routes.push_back({"direct", direct});

  if (inst.is_standard()) {
    const bool current_regime = rep.bipartite.bipartite() || inst.phase() == Phase::plus_one;
    if (current_regime) {
      const auto route = bipartite_route(inst);
      rep.comfort_routes.push_back({"laplacian", route.comfortability});
      if (!(route.psi == rep.psi)) rep.disagreements.push_back("laplacian-route state differs from arc solver");
    } else {
      const auto route = nonbipartite_route(inst);
      rep.comfort_routes.push_back({"signless-laplacian", route.comfortability});
      if (!(route.psi == rep.psi)) rep.disagreements.push_back("signless-route state differs from arc solver");
    }
  }
  if (inst.tail_count() == 2) {
    FactorOptions fo;
    fo.mode = opts.factor_mode;
    rep.factors = factor_counts(g, inst.boundary()[0], inst.boundary()[1], fo);
    if (inst.is_standard())
      rep.comfort_routes.push_back(
          {"closed-form", closed_form_comfort(*rep.factors, rep.bipartite.bipartite(), inst.phase())});
  }
  for (const auto& r : rep.comfort_routes)
    if (r.value != direct) rep.disagreements.push_back("comfortability route '" + r.route + "' disagrees");

  rep.scattering = scattering(inst, solver);
  if (!rep.scattering.orthogonal) rep.disagreements.push_back("scattering matrix is not orthogonal");
  if (rep.scattering.predicted && !rep.scattering.matches_prediction())
    rep.disagreements.push_back("scattering matrix differs from prediction");

  rep.audit = kirchhoff_audit(inst, rep.psi);
  for (const auto& v : rep.audit.violations) rep.disagreements.push_back(v.law + " fails at " + v.location);
  rep.constancy_violations = constancy_violations(inst, rep.psi);
  for (Vertex v : rep.constancy_violations)
    rep.disagreements.push_back("per-vertex constancy fails at vertex " + std::to_string(v));

  if (opts.simulate_steps) {
    const auto trace = simulate(inst, *opts.simulate_steps, rep.psi);
    SimulationSummary s;
    s.steps = trace.steps();
    s.horizon = trace.final_state.horizon;
    s.final_residual = trace.residuals.back();
    s.distance_to_exact = trace.distance_to_exact.value_or(0.0);
    s.converged_at = trace.converged_at;
    s.comfortability = comfortability(trace.final_state.internal);
    rep.simulation = s;
  }
  return rep;
}

namespace detail {

inline nlohmann::json fraction(const Rational& x) { return {{"exact", to_string(x)}, {"decimal", to_double(x)}}; }

inline nlohmann::json fraction_array(const RatVector& v) {
  auto a = nlohmann::json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

inline nlohmann::json matrix_json(const RatMatrix& m) {
  auto a = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
    a.push_back(row);
  }
  return a;
}

inline nlohmann::json histogram_json(const std::map<int, Integer>& h) {
  auto o = nlohmann::json::object();
  for (const auto& [omega, count] : h) o[std::to_string(omega)] = count.get_str();
  return o;
}

inline std::string join(const std::vector<Vertex>& v, const char* sep = " ") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + std::to_string(v[i]);
  return s;
}

}  // namespace detail

inline nlohmann::json to_json(const AnalysisReport& r) {
  using nlohmann::json;
  const Graph& g = r.instance.graph();
  json inst;
  inst["n"] = g.order();
  inst["edges"] = json::array();
  for (const auto& e : g.edges()) inst["edges"].push_back({e.u, e.v});
  inst["tails"] = json::array();
  for (std::size_t j = 0; j < r.instance.tail_count(); ++j)
    inst["tails"].push_back({{"vertex", r.instance.boundary()[j]}, {"inflow", to_string(r.instance.inflow()[j])}});
  inst["z"] = sign(r.instance.phase());

  json out;
  out["instance"] = inst;
  out["bipartite"] = r.bipartite.bipartite();
  if (r.bipartite.bipartite())
    out["partition"] = {{"x", r.bipartite.partition->x}, {"y", r.bipartite.partition->y}};
  else
    out["odd_cycle"] = r.bipartite.odd_cycle;
  out["kernel_dimension"] = r.kernel_dimension;

  out["psi"] = json::array();
  for (std::size_t a = 0; a < r.psi.size(); ++a) {
    json row = detail::fraction(r.psi[a]);
    row["arc"] = {g.arcs()[a].origin, g.arcs()[a].terminus};
    out["psi"].push_back(row);
  }

  json comfort;
  comfort["routes"] = json::array();
  for (const auto& rv : r.comfort_routes) {
    json row = detail::fraction(rv.value);
    row["route"] = rv.route;
    comfort["routes"].push_back(row);
  }
  comfort["agree"] = std::all_of(r.comfort_routes.begin(), r.comfort_routes.end(),
                                 [&](const RouteValue& v) { return v.value == r.comfort_routes.front().value; });
  out["comfortability"] = comfort;

  json sc;
  sc["alpha"] = detail::fraction_array(r.scattering.alpha);
  sc["beta"] = detail::fraction_array(r.scattering.beta);
  sc["sigma"] = detail::matrix_json(r.scattering.sigma);
  sc["class"] = to_string(r.scattering.classification);
  sc["orthogonal"] = r.scattering.orthogonal;
  if (r.scattering.predicted) {
    sc["predicted"] = detail::matrix_json(*r.scattering.predicted);
    sc["matches_prediction"] = r.scattering.matches_prediction();
  }
  out["scattering"] = sc;

  if (r.factors) {
    const auto& f = *r.factors;
    json fj{{"chi1", f.chi1.get_str()},
            {"chi2", f.chi2.get_str()},
            {"iota1", f.iota1.get_str()},
            {"iota2", f.iota2.get_str()},
            {"edge_count", f.edge_count}};
    if (!f.omega_histogram.odd_unicyclic.empty() || !f.omega_histogram.tree_odd_unicyclic.empty())
      fj["omega_histogram"] = {{"odd_unicyclic", detail::histogram_json(f.omega_histogram.odd_unicyclic)},
                               {"tree_odd_unicyclic", detail::histogram_json(f.omega_histogram.tree_odd_unicyclic)}};
    out["factors"] = fj;
  }

  json audit{{"checks", r.audit.checks}, {"violations", json::array()}};
  for (const auto& v : r.audit.violations) audit["violations"].push_back({{"law", v.law}, {"location", v.location}});
  audit["constancy_violations"] = r.constancy_violations;
  out["audit"] = audit;

  if (r.simulation) {
    const auto& s = *r.simulation;
    out["simulation"] = {{"steps", s.steps},
                         {"horizon", s.horizon},
                         {"final_residual", s.final_residual},
                         {"distance_to_exact", s.distance_to_exact},
                         {"comfortability", s.comfortability}};
    out["simulation"]["converged_at"] = s.converged_at ? json(*s.converged_at) : json(nullptr);
  }
  out["disagreements"] = r.disagreements;
  out["ok"] = r.ok();
  return out;
}

inline void render_text(std::ostream& os, const AnalysisReport& r) {
  const Graph& g = r.instance.graph();
  os << "instance: n=" << g.order() << " |E|=" << g.size() << " z=" << to_string(r.instance.phase()) << '\n';
  os << "tails:";
  for (std::size_t j = 0; j < r.instance.tail_count(); ++j)
    os << ' ' << r.instance.boundary()[j] << "(alpha=" << to_string(r.instance.inflow()[j]) << ')';
  os << '\n';
  if (r.bipartite.bipartite())
    os << "bipartite: yes  X={" << detail::join(r.bipartite.partition->x, ",") << "} Y={"
       << detail::join(r.bipartite.partition->y, ",") << "}\n";
  else
    os << "bipartite: no  odd cycle " << detail::join(r.bipartite.odd_cycle, "-") << '\n';
  os << "ker(I - E) dimension: " << r.kernel_dimension << "\n\n";

  os << "stationary state\n";
  for (std::size_t a = 0; a < r.psi.size(); ++a)
    os << "  (" << g.arcs()[a].origin << "," << g.arcs()[a].terminus << ")  " << std::left << std::setw(12)
       << to_string(r.psi[a]) << std::right << ' ' << decimal(r.psi[a]) << '\n';

  os << "\ncomfortability\n";
  for (const auto& rv : r.comfort_routes)
    os << "  " << std::left << std::setw(20) << rv.route << std::right << ' ' << std::left << std::setw(12)
       << to_string(rv.value) << std::right << ' ' << decimal(rv.value) << '\n';

  os << "\nscattering (" << to_string(r.scattering.classification) << ")\n";
  os << "  beta:";
  for (const auto& b : r.scattering.beta) os << ' ' << to_string(b);
  os << "\n  sigma:\n";
  for (std::size_t i = 0; i < r.scattering.sigma.rows(); ++i) {
    os << "   ";
    for (std::size_t j = 0; j < r.scattering.sigma.cols(); ++j) os << ' ' << to_string(r.scattering.sigma(i, j));
    os << '\n';
  }
  os << "  orthogonal: " << (r.scattering.orthogonal ? "yes" : "no");
  if (r.scattering.predicted) os << "  matches prediction: " << (r.scattering.matches_prediction() ? "yes" : "no");
  os << '\n';

  if (r.factors)
    os << "\nfactors: chi1=" << r.factors->chi1 << " chi2=" << r.factors->chi2 << " iota1=" << r.factors->iota1
       << " iota2=" << r.factors->iota2 << " |E|=" << r.factors->edge_count << '\n';

  os << "\naudit: " << r.audit.checks << " checks, " << r.audit.violations.size() << " violations";
  if (!r.constancy_violations.empty()) os << ", constancy fails at " << detail::join(r.constancy_violations, ",");
  os << '\n';

  if (r.simulation) {
    const auto& s = *r.simulation;
    os << "simulation: T=" << s.steps << " horizon=" << s.horizon << " residual=" << decimal(s.final_residual, 6)
       << " distance=" << decimal(s.distance_to_exact, 6) << " comfortability=" << decimal(s.comfortability);
    if (s.converged_at) os << " converged at step " << *s.converged_at;
    os << '\n';
  }
  os << (r.ok() ? "status: ok\n" : "status: DISAGREEMENT\n");
  for (const auto& d : r.disagreements) os << "  " << d << '\n';
}

// ---------------------------------------------------------------------------
// rank

struct CatalogRow {
  std::uint64_t class_id = 0;  ///< canonical edge mask of the graph
  Graph representative{2, {{1, 2}}};
  Vertex u1 = 1;
  Vertex un = 2;
  std::size_t labeled_count = 0;  ///< labeled (graph, pair) configurations in this orbit
  Rational comfort;
  char scattering = 'R';  ///< R: sigma = I, T: otherwise
  bool bipartite = false;
  std::size_t edge_count = 0;
  int distance = 0;
  std::string name;  ///< G1..G10 (n = 4 only)
};

struct ValueClass {
  Rational comfort;
  char scattering = 'R';
  bool bipartite = false;
  std::size_t edge_count = 0;
  std::optional<int> distance;  ///< bipartite classes only
  std::vector<std::size_t> rows;
  std::string name;
};

struct ClassMaximum {
  std::uint64_t class_id = 0;
  Graph representative{2, {{1, 2}}};
  Rational comfort;
  Vertex u1 = 1;
  Vertex un = 2;
  std::string name;  ///< n = 4 only
};

struct RankReport {
  int n = 0;
  Phase z = Phase::minus_one;
  std::vector<CatalogRow> rows;           ///< Comf descending
  std::vector<ValueClass> value_classes;  ///< G1..G10 order for n = 4, else Comf descending
  std::vector<ClassMaximum> maxima;       ///< Gamma order for n = 4, else Comf descending
  std::vector<std::vector<std::string>> tie_groups;
  std::size_t configurations = 0;
};

namespace detail {

inline std::string table_name(const Graph& g, Vertex u1, Vertex un) {
  if (g.order() != 4) return {};
  const int d = g.distance(u1, un);
  switch (g.size()) {
    case 6: return "G1";
    case 5: return g.degree(u1) == 2 ? "G2" : "G3";
    case 4: {
      bool cycle = true;
      for (Vertex v = 1; v <= 4; ++v) cycle = cycle && g.degree(v) == 2;
      if (cycle) return d == 1 ? "G4" : "G5";
      return g.degree(u1) == 1 ? "G6" : "G7";
    }
    case 3: return "G" + std::to_string(7 + d);
    default: return {};
  }
}

inline std::string gamma_name(const Graph& g) {
  if (g.order() != 4) return {};
  int max_degree = 0;
  for (Vertex v = 1; v <= 4; ++v) max_degree = std::max(max_degree, g.degree(v));
  switch (g.size()) {
    case 3: return max_degree == 3 ? "Gamma1" : "Gamma2";
    case 4: return max_degree == 2 ? "Gamma3" : "Gamma4";
    case 5: return "Gamma5";
    case 6: return "Gamma6";
    default: return {};
  }
}

inline int name_index(const std::string& s) {
  const auto digits = s.find_first_of("0123456789");
  return digits == std::string::npos ? 0 : std::stoi(s.substr(digits));
}

}  // namespace detail

/// All labeled connected graphs on n vertices and all ordered boundary pairs,
/// one row per (isomorphism class, pair orbit). Each orbit is solved once at
/// its canonical representative; the closed form is checked against the arc
/// solver on the way.
inline RankReport rank_catalog(int n, Phase z) {
  if (n < 2 || n > 5) throw InputError("rank: n must be in 2..5");
  RankReport rep;
  rep.n = n;
  rep.z = z;

  std::map<std::tuple<std::uint64_t, Vertex, Vertex>, std::size_t> orbits;
  for (const auto& g : enumerate_connected(n))
    for (Vertex u = 1; u <= n; ++u)
      for (Vertex v = 1; v <= n; ++v)
        if (u != v) {
          ++orbits[canonical_pair_form(g, u, v)];
          ++rep.configurations;
        }

  for (const auto& [key, count] : orbits) {
    const auto [mask, u1, un] = key;
    CatalogRow row;
    row.class_id = mask;
    row.representative = Graph::from_edge_mask(n, mask);
    row.u1 = u1;
    row.un = un;
    row.labeled_count = count;
    const auto inst = WalkInstance::standard(row.representative, u1, un, z);
    const StationarySolver solver(inst);
    row.comfort = comfortability_direct(solver.solve(inst.inflow()));
    if (closed_form_comfort(row.representative, u1, un, z) != row.comfort)
      throw OracleMismatch("closed form disagrees with the arc solver");
    row.scattering = scattering(inst, solver).reflects() ? 'R' : 'T';
    row.bipartite = bipartition(row.representative).bipartite();
    row.edge_count = row.representative.size();
    row.distance = row.representative.distance(u1, un);
    row.name = detail::table_name(row.representative, u1, un);
    rep.rows.push_back(std::move(row));
  }
  std::stable_sort(rep.rows.begin(), rep.rows.end(),
                   [](const CatalogRow& a, const CatalogRow& b) { return a.comfort > b.comfort; });

  // value classes: (bipartite, |E|, Comf, distance when bipartite)
  std::map<std::tuple<bool, std::size_t, Rational, int>, std::size_t> by_signature;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& row = rep.rows[i];
    const int d = row.bipartite ? row.distance : -1;
    auto [it, fresh] = by_signature.try_emplace({row.bipartite, row.edge_count, row.comfort, d}, rep.value_classes.size());
    if (fresh) {
      ValueClass c;
      c.comfort = row.comfort;
      c.scattering = row.scattering;
      c.bipartite = row.bipartite;
      c.edge_count = row.edge_count;
      if (row.bipartite) c.distance = row.distance;
      c.name = row.name;
      rep.value_classes.push_back(std::move(c));
    }
    auto& c = rep.value_classes[it->second];
    c.rows.push_back(i);
    if (c.scattering != row.scattering) throw OracleMismatch("scattering label differs within a value class");
    if (c.name != row.name) c.name.clear();
  }
  if (n == 4)
    std::stable_sort(rep.value_classes.begin(), rep.value_classes.end(), [](const ValueClass& a, const ValueClass& b) {
      return detail::name_index(a.name) < detail::name_index(b.name);
    });

  std::map<std::uint64_t, std::size_t> max_index;
  for (const auto& row : rep.rows) {
    auto [it, fresh] = max_index.try_emplace(row.class_id, rep.maxima.size());
    if (fresh) {
      // rows are Comf-descending, so the first row seen is a maximizer
      rep.maxima.push_back({row.class_id, row.representative, row.comfort, row.u1, row.un,
                            detail::gamma_name(row.representative)});
    }
  }
  if (n == 4)
    std::stable_sort(rep.maxima.begin(), rep.maxima.end(), [](const ClassMaximum& a, const ClassMaximum& b) {
      return detail::name_index(a.name) < detail::name_index(b.name);
    });

  std::map<Rational, std::vector<std::string>, std::greater<>> ties;
  for (std::size_t i = 0; i < rep.value_classes.size(); ++i) {
    const auto& c = rep.value_classes[i];
    ties[c.comfort].push_back(c.name.empty() ? "class" + std::to_string(i + 1) : c.name);
  }
  for (auto& [value, names] : ties)
    if (names.size() > 1) rep.tie_groups.push_back(std::move(names));
  return rep;
}

inline std::string edge_list(const Graph& g) {
  std::string s;
  for (const auto& e : g.edges()) s += (s.empty() ? "" : " ") + std::to_string(e.u) + "-" + std::to_string(e.v);
  return s;
}

inline nlohmann::json to_json(const RankReport& r) {
  using nlohmann::json;
  json out{{"n", r.n}, {"z", sign(r.z)}, {"configurations", r.configurations}};
  out["rows"] = json::array();
  for (const auto& row : r.rows) {
    json j = detail::fraction(row.comfort);
    j["class_id"] = row.class_id;
    j["edges"] = edge_list(row.representative);
    j["u1"] = row.u1;
    j["un"] = row.un;
    j["labeled_count"] = row.labeled_count;
    j["scattering"] = std::string(1, row.scattering);
    j["bipartite"] = row.bipartite;
    j["edge_count"] = row.edge_count;
    j["distance"] = row.distance;
    if (!row.name.empty()) j["name"] = row.name;
    out["rows"].push_back(j);
  }
  out["value_classes"] = json::array();
  for (const auto& c : r.value_classes) {
    json j = detail::fraction(c.comfort);
    j["scattering"] = std::string(1, c.scattering);
    j["bipartite"] = c.bipartite;
    j["edge_count"] = c.edge_count;
    j["distance"] = c.distance ? json(*c.distance) : json(nullptr);
    j["rows"] = c.rows.size();
    if (!c.name.empty()) j["name"] = c.name;
    out["value_classes"].push_back(j);
  }
  out["maxima"] = json::array();
  for (const auto& m : r.maxima) {
    json j = detail::fraction(m.comfort);
    j["class_id"] = m.class_id;
    j["edges"] = edge_list(m.representative);
    j["argmax"] = {m.u1, m.un};
    if (!m.name.empty()) j["name"] = m.name;
    out["maxima"].push_back(j);
  }
  out["tie_groups"] = r.tie_groups;
  return out;
}

inline void render_text(std::ostream& os, const RankReport& r) {
  os << "catalog n=" << r.n << " z=" << to_string(r.z) << ": " << r.configurations << " labeled configurations, "
     << r.rows.size() << " pair orbits\n\n";
  os << "value classes\n";
  os << "  name   Comf       decimal        scat  bip  |E|  dist  orbits\n";
  for (std::size_t i = 0; i < r.value_classes.size(); ++i) {
    const auto& c = r.value_classes[i];
    os << "  " << std::left << std::setw(6) << (c.name.empty() ? "#" + std::to_string(i + 1) : c.name) << ' '
       << std::setw(10) << to_string(c.comfort) << ' ' << std::setw(14) << decimal(c.comfort) << ' ' << std::setw(5)
       << c.scattering << ' ' << std::setw(4) << (c.bipartite ? "yes" : "no") << ' ' << std::setw(4)
       << c.edge_count << ' ' << std::setw(5) << (c.distance ? std::to_string(*c.distance) : "-") << ' '
       << c.rows.size() << std::right << '\n';
  }
  os << "\nclass maxima\n";
  for (const auto& m : r.maxima)
    os << "  " << std::left << std::setw(8) << (m.name.empty() ? "-" : m.name) << ' ' << std::setw(10)
       << to_string(m.comfort) << ' ' << std::setw(14) << decimal(m.comfort) << " at (" << m.u1 << "," << m.un
       << ")  edges " << edge_list(m.representative) << std::right << '\n';
  if (!r.tie_groups.empty()) {
    os << "\ntie groups\n";
    for (const auto& t : r.tie_groups) {
      os << " ";
      for (const auto& name : t) os << ' ' << name;
      os << '\n';
    }
  }
  os << "\npair orbits (Comf descending)\n";
  for (const auto& row : r.rows)
    os << "  " << std::left << std::setw(10) << to_string(row.comfort) << ' ' << row.scattering << "  (" << row.u1
       << "," << row.un << ")  x" << std::setw(4) << row.labeled_count << " edges " << edge_list(row.representative)
       << (row.name.empty() ? "" : "  " + row.name) << std::right << '\n';
}

// ---------------------------------------------------------------------------
// selftest

struct SuiteResult {
  std::string name;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::vector<std::string> messages;  ///< first few failures

  bool passed() const noexcept { return failures == 0; }

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    ++failures;
    if (messages.size() < 10) messages.push_back(what);
  }
};

struct SelftestOptions {
  int max_n = 5;
  bool mutate_signless = false;
  std::size_t simulate_steps = 2000;
};

namespace detail {

inline std::string describe(const Graph& g, Vertex u1, Vertex un, Phase z) {
  return "n=" + std::to_string(g.order()) + " edges " + edge_list(g) + " pair (" + std::to_string(u1) + "," +
         std::to_string(un) + ") z=" + to_string(z);
}

template <class F>
void guarded(SuiteResult& s, const std::string& where, F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    s.expect(false, where + ": " + e.what());
  }
}

inline std::vector<std::vector<Vertex>> boundary_sets(int n, int r) {
  std::vector<std::vector<Vertex>> out;
  std::vector<Vertex> cur;
  std::function<void(Vertex)> rec = [&](Vertex from) {
    if (static_cast<int>(cur.size()) == r) {
      out.push_back(cur);
      return;
    }
    for (Vertex v = from; v <= n; ++v) {
      cur.push_back(v);
      rec(v + 1);
      cur.pop_back();
    }
  };
  rec(1);
  return out;
}

}  // namespace detail

/// Routes, audits and constancy over every standard instance n <= max_n.
inline std::vector<SuiteResult> catalog_sweep(int max_n) {
  SuiteResult routes{"three-route agreement"}, audits{"kirchhoff audits"}, constancy{"per-vertex constancy"};
  for (int n = 2; n <= max_n; ++n)
    for (const auto& g : enumerate_connected(n)) {
      const bool bip = bipartition(g).bipartite();
      for (Phase z : {Phase::minus_one, Phase::plus_one})
        for (Vertex u = 1; u <= n; ++u)
          for (Vertex v = 1; v <= n; ++v) {
            if (u == v) continue;
            const std::string where = detail::describe(g, u, v, z);
            detail::guarded(routes, where, [&] {
              const auto inst = WalkInstance::standard(g, u, v, z);
              const ArcField psi = stationary_state(inst);
              const Rational direct = comfortability_direct(psi);
              if (bip || z == Phase::plus_one) {
                const auto route = bipartite_route(inst);
                routes.expect(route.comfortability == direct, where + ": laplacian route");
                routes.expect(route.psi == psi, where + ": laplacian state");
              } else {
                const auto route = nonbipartite_route(inst);
                routes.expect(route.comfortability == direct, where + ": signless route");
                routes.expect(route.psi == psi, where + ": signless state");
              }
              routes.expect(closed_form_comfort(g, u, v, z) == direct, where + ": closed form");

              const auto audit = kirchhoff_audit(inst, psi);
              audits.checks += audit.checks;
              for (const auto& viol : audit.violations) {
                audits.expect(false, where + ": " + viol.law + " at " + viol.location);
                --audits.checks;
              }
              constancy.expect(constancy_violations(inst, psi).empty(), where);
            });
          }
    }
  return {routes, audits, constancy};
}

inline SuiteResult factor_oracle_suite(int max_n, bool mutate) {
  SuiteResult s{"determinant/enumeration oracles"};
  FactorOptions opts;
  opts.mutate_signless = mutate;
  for (int n = 2; n <= max_n; ++n)
    for (const auto& g : enumerate_connected(n))
      for (Vertex u = 1; u <= n; ++u)
        for (Vertex v = 1; v <= n; ++v)
          if (u != v) {
            const std::string where = detail::describe(g, u, v, Phase::minus_one);
            detail::guarded(s, where, [&] {
              const auto f = factor_counts(g, u, v, opts);
              s.expect(f.chi1 >= 1, where + ": chi1 < 1");
              s.expect((f.iota1 == 0) == bipartition(g).bipartite(), where + ": iota1 vanishing");
              s.expect(f.iota2 >= f.chi1, where + ": iota2 < chi1");
            });
          }
  for (int len = 3; len <= 9; ++len) {
    const Rational d = cycle_incidence_check(len);
    s.expect(len % 2 == 1 ? abs(d) == 2 : d == 0, "cycle incidence det, length " + std::to_string(len));
  }
  return s;
}

inline SuiteResult scattering_suite(int max_n) {
  SuiteResult s{"scattering"};
  for (int n = 2; n <= max_n; ++n)
    for (const auto& g : enumerate_connected(n)) {
      const auto check = bipartition(g);
      for (int r = 2; r <= std::min(3, n); ++r)
        for (const auto& boundary : detail::boundary_sets(n, r)) {
          const std::string where = "n=" + std::to_string(n) + " edges " + edge_list(g) + " tails " +
                                    detail::join(boundary, ",");
          detail::guarded(s, where, [&] {
            std::vector<Rational> alpha(r, Rational(0));
            alpha[0] = 1;
            const WalkInstance inst(g, boundary, alpha, Phase::minus_one);
            const auto rep = scattering(inst);
            s.expect(rep.orthogonal, where + ": sigma not orthogonal");
            s.expect(rep.matches_prediction(), where + ": sigma != prediction");
            if (!check.bipartite()) return;
            // balanced inflows pass through unchanged
            std::vector<int> digits(r, -2);
            while (true) {
              Rational x = 0, y = 0;
              RatVector a(r);
              for (int j = 0; j < r; ++j) {
                a[j] = digits[j];
                (check.partition->in_x(boundary[j]) ? x : y) += a[j];
              }
              if (x == y) s.expect(rep.sigma * a == a, where + ": balanced inflow not transmitted unchanged");
              int k = 0;
              while (k < r && digits[k] == 2) digits[k++] = -2;
              if (k == r) break;
              ++digits[k];
            }
          });
        }
    }
  return s;
}

inline std::vector<Rational> fractions(std::initializer_list<std::pair<long, long>> xs) {
  std::vector<Rational> v;
  for (auto [p, q] : xs) v.push_back(make_rational(p, q));
  return v;
}

inline SuiteResult table_suite() {
  SuiteResult s{"four-vertex tables"};
  detail::guarded(s, "rank n=4", [&] {
    const auto minus = rank_catalog(4, Phase::minus_one);
    const auto expected = fractions({{5, 12}, {3, 4}, {1, 2}, {19, 16}, {5, 4}, {7, 4}, {3, 4}, {1, 1}, {5, 4}, {3, 2}});
    const std::string labels = "RRRTTRRTTT";
    s.expect(minus.value_classes.size() == 10, "ten value classes");
    for (std::size_t i = 0; i < std::min<std::size_t>(10, minus.value_classes.size()); ++i) {
      const auto& c = minus.value_classes[i];
      s.expect(c.name == "G" + std::to_string(i + 1), "class name " + c.name);
      s.expect(c.comfort == expected[i], c.name + " comfortability " + to_string(c.comfort));
      s.expect(c.scattering == labels[i], c.name + " scattering label");
      s.expect((c.scattering == 'R') == !c.bipartite, c.name + " R exactly on non-bipartite classes");
    }
    const auto plus = rank_catalog(4, Phase::plus_one);
    const auto max_minus = fractions({{5, 4}, {3, 2}, {5, 4}, {7, 4}, {3, 4}, {5, 12}});
    const auto max_plus = fractions({{5, 4}, {3, 2}, {5, 4}, {17, 12}, {3, 2}, {13, 8}});
    for (const auto& [rep, want] : {std::pair{&minus, &max_minus}, std::pair{&plus, &max_plus}}) {
      s.expect(rep->maxima.size() == 6, "six isomorphism classes");
      for (std::size_t i = 0; i < std::min<std::size_t>(6, rep->maxima.size()); ++i)
        s.expect(rep->maxima[i].comfort == (*want)[i],
                 rep->maxima[i].name + " maximum at z=" + to_string(rep->z) + " is " + to_string(rep->maxima[i].comfort));
    }
  });
  return s;
}

inline SuiteResult worked_values_suite() {
  SuiteResult s{"worked values"};
  detail::guarded(s, "worked values", [&] {
    const Graph k4(4, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}});
    const Graph c4(4, {{1, 2}, {2, 3}, {3, 4}, {1, 4}});
    const auto [i1, i2] = odd_unicyclic_sums(k4, 1);
    s.expect(i1 == 48, "iota1(K4)");
    s.expect(i2 == 20, "iota2(K4; 1)");
    s.expect(comfortability_direct(stationary_state(WalkInstance::standard(k4, 1, 4))) == make_rational(5, 12),
             "comfortability K4");
    s.expect(spanning_tree_count(c4) == 4, "chi1(C4)");
    s.expect(two_forest_count(c4, 1, 4) == 3, "chi2(C4; 1, 4)");
    s.expect(comfortability_direct(stationary_state(WalkInstance::standard(c4, 1, 4))) == make_rational(19, 16),
             "comfortability C4 adjacent");
  });
  return s;
}

inline SuiteResult tree_formula_suite(int max_n = 8) {
  SuiteResult s{"tree formula"};
  for (int n = 2; n <= max_n; ++n)
    for (const auto& t : nonisomorphic_trees(n))
      for (Vertex u = 1; u <= n; ++u)
        for (Vertex v = 1; v <= n; ++v)
          if (u != v) {
            const std::string where = detail::describe(t, u, v, Phase::minus_one);
            detail::guarded(s, where, [&] {
              const Rational want = make_rational(t.distance(u, v) + n - 1, 4);
              s.expect(comfortability_direct(stationary_state(WalkInstance::standard(t, u, v))) == want, where);
            });
          }
  return s;
}

inline SuiteResult simulator_suite(int max_n, std::size_t steps) {
  SuiteResult s{"simulator convergence"};
  detail::guarded(s, "K3 step 1", [&] {
    const Graph k3(3, {{1, 2}, {1, 3}, {2, 3}});
    const WalkInstance inst(k3, {1, 3}, {Rational(9), Rational(9)});
    const auto trace = simulate(inst, 1);
    const auto& arcs = k3.arcs();
    const auto frame = unsigned_frame(trace.snapshots[0], 1, inst.phase());
    for (std::size_t a = 0; a < arcs.size(); ++a) {
      const double want = arcs[a].origin != 2 ? 6.0 : 0.0;
      s.expect(frame[a] == want, "K3 step-1 transmitted amplitude");
    }
    for (std::size_t j = 0; j < 2; ++j)
      s.expect(sign(inst.phase()) * trace.final_state.tails[j].outbound(0) == -3.0, "K3 step-1 reflected amplitude");
  });
  for (int n = 2; n <= max_n; ++n)
    for (const auto& g : enumerate_connected(n))
      for (Vertex u = 1; u <= n; ++u)
        for (Vertex v = 1; v <= n; ++v)
          if (u != v) {
            const std::string where = detail::describe(g, u, v, Phase::minus_one);
            detail::guarded(s, where, [&] {
              const auto inst = WalkInstance::standard(g, u, v);
              const auto trace = simulate(inst, steps, stationary_state(inst));
              s.expect(*trace.distance_to_exact <= 1e-6, where + ": distance " + decimal(*trace.distance_to_exact, 3));
            });
          }
  return s;
}

inline std::vector<SuiteResult> run_selftest(const SelftestOptions& opts = {}) {
  std::vector<SuiteResult> out = catalog_sweep(opts.max_n);
  out.push_back(factor_oracle_suite(opts.max_n, opts.mutate_signless));
  out.push_back(scattering_suite(opts.max_n));
  out.push_back(table_suite());
  out.push_back(worked_values_suite());
  out.push_back(tree_formula_suite());
  out.push_back(simulator_suite(std::min(opts.max_n, 4), opts.simulate_steps));
  return out;
}

}  // namespace gqw
