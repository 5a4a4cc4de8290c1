#include "cab/cli/workbench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <future>
#include <iomanip>
#include <limits>
#include <sstream>

#include "cab/error.hpp"
#include "cab/io/input.hpp"
#include "cab/random.hpp"

namespace cab::cli {

using io::Json;

namespace {

constexpr const char* kVerifySchema = "cabench.verify/1";
constexpr const char* kHierarchySchema = "cabench.hierarchy/1";
constexpr const char* kFlowSchema = "cabench.flow/1";

const Window kDefaultWindow{1, -2, 1};

std::vector<io::InputDocument> load_all(const WorkbenchConfig& cfg) {
  std::vector<io::InputDocument> docs;
  for (const auto& p : cfg.inputs) docs.push_back(io::load_input(p));
  return docs;
}

void require_preset(const std::string& preset, const std::vector<std::string>& known, const char* command) {
  if (preset.empty() || std::find(known.begin(), known.end(), preset) != known.end()) return;
  std::string list;
  for (const auto& k : known) list += (list.empty() ? "" : ", ") + k;
  throw ParseError(std::string("unknown ") + command + " preset '" + preset + "' (known: " + list + ")");
}

Json header(const char* schema, const char* command, const WorkbenchConfig& cfg) {
  Json inputs = Json::array();
  for (const auto& p : cfg.inputs) inputs.push_back(p);
  return Json{{"schema", schema}, {"command", command}, {"seed", cfg.seed}, {"preset", cfg.preset}, {"inputs", inputs}};
}

IdentityReport failed(std::string identity, std::string witness) {
  IdentityReport r;
  r.identity = std::move(identity);
  r.record(false, witness);
  return r;
}

FPAlgebroid build_algebroid(const io::AlgebroidInput& a) { return FPAlgebroid(a.name, a.ring, a.anchor, a.structure); }

QMap build_q(const io::AlgebroidInput& a) {
  return a.q ? QMap(*a.q) : QMap::zero(a.ring, static_cast<int>(a.anchor.size()));
}

std::optional<LenardProblem> lenard_preset(const std::string& name) {
  if (name == "oscillator-R4") return presets::oscillator();
  if (name == "zero-q") return presets::oscillator_zero_q();
  if (name == "split-pairs") return presets::oscillator_split_pairs();
  if (name == "incompatible-q") return presets::oscillator_incompatible_q();
  if (name == "torus-translation") return presets::torus_translation();
  return std::nullopt;
}

SuiteResult run_lenard(const LenardProblem& p) {
  try {
    return lenard_suite(p);
  } catch (const StructureError& e) {
    SuiteResult r;
    r.suite = "lenard";
    r.identities.push_back(failed("hierarchy construction [" + p.name + "]", e.what()));
    r.notes["problem"] = p.name;
    return r;
  }
}

SuiteResult verify_courant(const WorkbenchConfig& cfg, const std::vector<io::InputDocument>& docs) {
  SuiteConfig sc{cfg.seed, cfg.instances, cfg.mode_radius};
  std::vector<NamedAlgebra> algebras;
  std::vector<IdentityReport> broken;
  bool from_input = false;
  for (const auto& d : docs) {
    if (!d.lie_algebra) continue;
    from_input = true;
    const auto& g = *d.lie_algebra;
    try {
      FinLieAlg alg = FinLieAlg::from_brackets(g.dim, g.brackets);
      if (!g.omega) throw DomainError("no symplectic form given");
      algebras.push_back({g.name, alg, SymplForm(alg, *g.omega)});
    } catch (const Error& e) {
      broken.push_back(failed("structure constants and form [" + g.name + "]", e.what()));
    }
  }
  if (!from_input) {
    for (auto& a : default_algebras())
      if (cfg.preset.empty() || cfg.preset == a.name || (cfg.preset != "aff1" && cfg.preset != "filiform4"))
        algebras.push_back(a);
  }
  SuiteResult r = courant_suite(sc, algebras);
  r.identities.insert(r.identities.end(), broken.begin(), broken.end());
  return r;
}

SuiteResult verify_algebroid(const WorkbenchConfig& cfg, const std::vector<io::InputDocument>& docs) {
  SuiteConfig sc{cfg.seed, cfg.instances, cfg.mode_radius};
  std::vector<AlgebroidCase> cases;
  std::vector<IdentityReport> broken;
  bool from_input = false;
  for (const auto& d : docs) {
    if (!d.algebroid) continue;
    from_input = true;
    try {
      FPAlgebroid e = build_algebroid(*d.algebroid);
      cases.push_back({e, d.algebroid->q ? std::optional<QMap>(build_q(*d.algebroid)) : std::nullopt});
    } catch (const Error& e) {
      broken.push_back(failed("algebroid presentation [" + d.algebroid->name + "]", e.what()));
    }
  }
  if (!from_input) {
    if (cfg.preset == "tangent-t1") {
      cases.push_back({FPAlgebroid::tangent(torus(1), "tangent-t1"), std::nullopt});
    } else if (cfg.preset == "so3") {
      cases.push_back({FPAlgebroid::so3_zero_anchor(), std::nullopt});
    } else if (auto p = lenard_preset(cfg.preset)) {
      cases.push_back({p->algebroid, p->q});
    } else {
      cases = default_algebroids();
    }
  }
  SuiteResult r = algebroid_suite(sc, cases);
  r.identities.insert(r.identities.end(), broken.begin(), broken.end());
  return r;
}

SuiteResult verify_lenard(const WorkbenchConfig& cfg, const std::vector<io::InputDocument>& docs) {
  SuiteResult all;
  all.suite = "lenard";
  bool from_input = false;
  for (const auto& d : docs) {
    if (!d.lenard) continue;
    from_input = true;
    try {
      LenardProblem p{d.algebroid->name, build_algebroid(*d.algebroid), build_q(*d.algebroid), d.lenard->seed,
                      d.lenard->omega, d.lenard->cap};
      SuiteResult r = run_lenard(p);
      all.identities.insert(all.identities.end(), r.identities.begin(), r.identities.end());
      for (const auto& [k, v] : r.notes) all.notes[p.name + ": " + k] = v;
    } catch (const Error& e) {
      all.identities.push_back(failed("algebroid presentation [" + d.algebroid->name + "]", e.what()));
    }
  }
  if (from_input) return all;
  auto p = lenard_preset(cfg.preset);
  return run_lenard(p ? *p : presets::oscillator());
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> v{"courant", "semidirect", "algebroid", "lenard"};
  return v;
}

const std::vector<std::string>& verify_presets() {
  static const std::vector<std::string> v{"aff1",          "filiform4", "tangent-t1",  "so3",
                                          "oscillator-R4", "zero-q",    "split-pairs", "incompatible-q"};
  return v;
}

const std::vector<std::string>& hierarchy_presets() {
  static const std::vector<std::string> v{"oscillator-R4", "zero-q", "split-pairs", "incompatible-q",
                                          "torus-translation"};
  return v;
}

const std::vector<std::string>& flow_presets() {
  static const std::vector<std::string> v{"linear-translation", "zero", "quadratic"};
  return v;
}

std::vector<std::string> parse_suites(std::string_view text) {
  std::vector<std::string> out;
  if (text == "none") return out;
  std::size_t start = 0;
  while (start <= text.size() && !text.empty()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    std::string name(text.substr(start, end - start));
    if (name == "lenard-certify") name = "lenard";
    const auto& known = suite_names();
    if (std::find(known.begin(), known.end(), name) == known.end())
      throw ParseError("unknown suite '" + name + "' (known: courant, semidirect, algebroid, lenard)");
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
    start = end + 1;
  }
  return out;
}

Window parse_window(std::string_view text) {
  int v[3];
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t end = i < 2 ? text.find(':', pos) : text.size();
    if (end == std::string_view::npos) throw ParseError("window must be radius:lo:hi, got '" + std::string(text) + "'");
    const auto part = text.substr(pos, end - pos);
    auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), v[i]);
    if (ec != std::errc() || p != part.data() + part.size())
      throw ParseError("window must be radius:lo:hi, got '" + std::string(text) + "'");
    pos = end + 1;
  }
  if (v[0] < 0 || v[1] > v[2]) throw ParseError("window needs radius >= 0 and lo <= hi");
  return {v[0], v[1], v[2]};
}

CommandResult cmd_verify(const WorkbenchConfig& cfg) {
  require_preset(cfg.preset, verify_presets(), "verify");
  if (cfg.instances < 1) throw DomainError("instance count must be positive");
  if (cfg.mode_radius < 0) throw DomainError("mode radius must be non-negative");
  const auto docs = load_all(cfg);
  const std::vector<std::string> suites = cfg.suites ? *cfg.suites : suite_names();

  Json report = header(kVerifySchema, "verify", cfg);
  report["mode_radius"] = cfg.mode_radius;
  report["instances"] = cfg.instances;
  // Suites draw from independent generators, so they run concurrently and are assembled in order.
  std::vector<std::future<SuiteResult>> runs;
  for (const auto& s : suite_names()) {
    if (std::find(suites.begin(), suites.end(), s) == suites.end()) continue;
    runs.push_back(std::async(std::launch::async, [&cfg, &docs, s] {
      if (s == "courant") return verify_courant(cfg, docs);
      if (s == "semidirect") return semidirect_suite({cfg.seed, cfg.instances, cfg.mode_radius});
      if (s == "algebroid") return verify_algebroid(cfg, docs);
      return verify_lenard(cfg, docs);
    }));
  }
  Json results = Json::array();
  bool ok = true;
  for (auto& run : runs) {
    const SuiteResult r = run.get();
    ok = ok && r.certified();
    results.push_back(io::to_json(r));
  }
  report["suites"] = results;
  report["certified"] = ok;
  return {ok ? kOk : kFailed, report};
}

CommandResult cmd_hierarchy(const WorkbenchConfig& cfg) {
  require_preset(cfg.preset, hierarchy_presets(), "hierarchy");
  const auto docs = load_all(cfg);
  Json report = header(kHierarchySchema, "hierarchy", cfg);

  std::optional<LenardProblem> problem;
  for (const auto& d : docs) {
    if (!d.lenard) continue;
    if (problem) throw ParseError(d.source + ": only one [lenard] section may be given");
    try {
      problem = LenardProblem{d.algebroid->name, build_algebroid(*d.algebroid), build_q(*d.algebroid),
                              d.lenard->seed,    d.lenard->omega,             d.lenard->cap};
    } catch (const StructureError& e) {
      report["problem"] = d.algebroid->name;
      report["error"] = std::string("algebroid presentation: ") + e.what();
      report["certified"] = false;
      return {kFailed, report};
    }
  }
  if (!problem) problem = lenard_preset(cfg.preset.empty() ? "oscillator-R4" : cfg.preset);
  const LenardProblem& p = *problem;
  report["problem"] = p.name;
  report["algebroid"] = Json{{"name", p.algebroid.name()}, {"ring", io::ring_text(p.algebroid.ring())}, {"rank", p.algebroid.rank()}};

  const DStar ds = build_dstar(p.q, p.algebroid);
  report["dstar"] = Json{{"accepted", ds.accepted},
                         {"failed_identity", ds.failed_identity},
                         {"generator", ds.generator},
                         {"residual", to_string(ds.residual)}};
  if (!ds.accepted) {
    report["error"] = "Q rejected: " + ds.failed_identity + " fails on " + ds.generator;
    report["certified"] = false;
    return {kFailed, report};
  }

  std::optional<LenardState> built;
  try {
    built.emplace(build_hierarchy(p.algebroid, p.q, p.seed, p.omega, p.cap));
  } catch (const StructureError& e) {
    report["error"] = e.what();
    report["certified"] = false;
    return {kFailed, report};
  }
  const LenardState& st = *built;
  Json hams = Json::array(), omegas = Json::array(), flows = Json::array();
  for (std::size_t j = 0; j < st.hams.size(); ++j)
    hams.push_back(Json{{"j", j + 1}, {"text", to_string(st.hams[j])}, {"records", io::to_json(st.hams[j])}});
  for (std::size_t j = 0; j < st.omegas.size(); ++j)
    omegas.push_back(Json{{"j", j + 1}, {"text", to_string(st.omegas[j])}, {"form", io::to_json(st.omegas[j])}});
  for (std::size_t j = 0; j < st.flows.size(); ++j) flows.push_back(Json{{"j", j + 1}, {"section", io::to_json(st.flows[j])}});
  report["chain"] = Json{{"length", st.hams.size()},
                         {"hamiltonian_stop", st.ham_stop},
                         {"two_form_stop", st.omega_stop},
                         {"hamiltonians", hams},
                         {"two_forms", omegas},
                         {"flows", flows}};
  const LenardCertificate cert = certify(st);
  Json entries = Json::array();
  for (const auto& e : cert.entries) entries.push_back(Json{{"identity", e.identity}, {"zero", e.zero}, {"residual", e.residual}});
  report["certificate"] = entries;
  report["first_failure"] = cert.first_failure();
  report["certified"] = cert.certified();
  return {cert.certified() ? kOk : kFailed, report};
}

namespace {

struct FlowSetup {
  std::string name;
  LoopPoint point;
  CasimirSpec casimir;
  FlowConfig config;
  std::optional<std::vector<Rational>> translation;
  std::optional<int> quadratic_s;
};

// Quadratic preset order study and commuting probe steps.
constexpr double kOrderTime = 1.0;
constexpr double kOrderDt = 0.0125;
const std::vector<double> kProbeDts{0.2, 0.1, 0.05};

LoopPoint seeded_point(std::uint64_t seed, const Window& w) {
  InstanceGenerator gen(seed);
  SparseShape s;
  s.max_terms = 6;
  s.mode_radius = w.radius;
  s.loop_lo = w.lo;
  s.loop_hi = w.hi;
  s.num_bound = 2;
  s.den_bound = 2;
  // Redraw until the quadratic flow moves and the two lowest watched Casimirs
  // are nonzero. Among the first kDraws such points prefer one whose quadratic
  // trajectory stays within kGrowth of its initial norm on [0, 1] and whose
  // order study and commuting probe rise above the rounding floor.
  constexpr int kDraws = 256;
  constexpr double kGrowth = 3;
  const CasimirSpec h0 = casimirs::quadratic(0), h1 = casimirs::quadratic(1);
  const CompiledFlow flow(torus(1), w, h0);
  FlowConfig probe;
  probe.window = w;
  probe.steps = 1000;
  probe.leak_tolerance = std::numeric_limits<double>::infinity();
  probe.snapshot_every = 1;
  std::optional<LoopPoint> first;
  for (int tries = 0; tries < kDraws || !first;) {
    LoopPoint pt(gen.apair(torus(1), s), w);
    if (h0.value(pt.value()).is_zero() || h1.value(pt.value()).is_zero()) continue;
    if (flow_rhs(pt, h0).tangent.is_zero()) continue;
    ++tries;
    if (!first) first = pt;
    const State y0 = flow.encode(pt);
    try {
      const Trajectory tr = integrate(flow, y0, probe);
      const double bound = kGrowth * l2_norm(y0);
      if (std::any_of(tr.snapshots.begin(), tr.snapshots.end(), [bound](const auto& sn) { return l2_norm(sn.second) > bound; }))
        continue;
    } catch (const NumericalError&) {
      continue;
    }
    if (!convergence_order(pt, h0, kOrderTime, kOrderDt).resolved) continue;
    if (!flow_commute_probe(pt, h0, h1, kProbeDts).order) continue;
    return pt;
  }
  return *first;
}

FlowSetup flow_setup(const WorkbenchConfig& cfg, const std::vector<io::InputDocument>& docs) {
  for (const auto& d : docs) {
    if (!d.flow) continue;
    const io::FlowInput& f = *d.flow;
    const Window w = cfg.window.value_or(f.window);
    FlowSetup s{std::filesystem::path(d.source).stem().string(), LoopPoint(f.point, w), casimirs::zero(), {}, std::nullopt, std::nullopt};
    if (f.casimir == "translation") {
      s.casimir = casimirs::translation(f.ring, f.translation);
      s.translation = f.translation;
    } else if (f.casimir == "quadratic") {
      s.casimir = casimirs::quadratic(f.s);
      s.quadratic_s = f.s;
    }
    s.config.dt = f.dt;
    s.config.steps = f.steps;
    s.config.window = w;
    s.config.policy = f.policy;
    s.config.leak_tolerance = f.leak_tolerance;
    s.config.snapshot_every = f.snapshot_every;
    for (int k : f.watch) s.config.watch.push_back(casimirs::quadratic(k));
    return s;
  }
  const std::string name = cfg.preset.empty() ? "linear-translation" : cfg.preset;
  const Window w = cfg.window.value_or(kDefaultWindow);
  FlowSetup s{name, seeded_point(cfg.seed, w), casimirs::zero(), {}, std::nullopt, std::nullopt};
  s.config.window = w;
  s.config.steps = 100;
  if (name == "linear-translation") {
    s.translation = std::vector<Rational>{Rational(3, 2)};
    s.casimir = casimirs::translation(torus(1), *s.translation);
  } else if (name == "quadratic") {
    s.quadratic_s = 0;
    s.casimir = casimirs::quadratic(0);
    s.config.steps = 1000;
    s.config.snapshot_every = 100;
    // On radius-1 windows the dropped part pairs to zero with the window.
    s.config.leak_tolerance = 1e6;
    s.config.watch = {casimirs::quadratic(-1), casimirs::quadratic(0), casimirs::quadratic(1)};
  }
  return s;
}

/// An unresolved check measured rounding noise; it is reported but not certified.
Json check(const std::string& name, double value, const std::string& relation, double threshold, bool resolved = true) {
  const bool pass = relation == "<" ? value < threshold : value >= threshold;
  return Json{{"name", name},           {"value", value},       {"relation", relation},
              {"threshold", threshold}, {"resolved", resolved}, {"pass", resolved && pass}};
}

}  // namespace

CommandResult cmd_flow(const WorkbenchConfig& cfg) {
  require_preset(cfg.preset, flow_presets(), "flow");
  const auto docs = load_all(cfg);
  const FlowSetup s = flow_setup(cfg, docs);
  Json report = header(kFlowSchema, "flow", cfg);
  report["problem"] = s.name;
  report["ring"] = io::ring_text(s.point.ring());
  report["window"] = io::to_json(s.config.window);
  report["casimir"] = s.casimir.name;
  report["config"] = Json{{"dt", s.config.dt},
                          {"steps", s.config.steps},
                          {"policy", to_string(s.config.policy)},
                          {"leak_tolerance", s.config.leak_tolerance},
                          {"snapshot_every", s.config.snapshot_every}};
  Json watch = Json::array();
  for (const auto& w : s.config.watch) watch.push_back(w.name);
  report["watch"] = watch;
  Json initial = Json{{"field", io::to_json(s.point.value().field)}, {"form", io::to_json(s.point.value().form)}};
  report["initial_point"] = initial;

  const CompiledFlow flow(s.point.ring(), s.config.window, s.casimir);
  const State y0 = flow.encode(s.point);
  std::optional<Trajectory> run;
  try {
    run.emplace(integrate(flow, y0, s.config));
  } catch (const NumericalError& e) {
    report["error"] = Json{{"message", e.what()}, {"step", e.step()}};
    report["completed"] = false;
    return {kFailed, report};
  }
  const Trajectory& tr = *run;

  Json columns = Json::array({"step", "t", "retained2", "leak2"});
  for (const auto& w : s.config.watch) {
    columns.push_back(w.name + ".re");
    columns.push_back(w.name + ".im");
  }
  Json rows = Json::array();
  for (const auto& d : tr.diagnostics) {
    Json row = Json::array({d.step, d.t, d.retained2, d.leak2});
    for (const auto& v : d.watched) {
      row.push_back(v.real());
      row.push_back(v.imag());
    }
    rows.push_back(row);
  }
  report["diagnostics"] = Json{{"columns", columns}, {"rows", rows}};
  Json snaps = Json::array();
  for (const auto& [step, y] : tr.snapshots)
    snaps.push_back(Json{{"step", step}, {"t", step * s.config.dt}, {"state", io::state_json(tr.basis, y, s.point.dim())}});
  report["snapshots"] = snaps;
  Json warnings = Json::array();
  for (const auto& w : tr.warnings) warnings.push_back(w);
  report["warnings"] = warnings;

  Json checks = Json::array();
  if (s.translation) {
    const State exact = translation_solution(flow, y0, *s.translation, s.config.dt * s.config.steps);
    const double scale = l2_norm(exact);
    checks.push_back(check("closed-form relative error", scale > 0 ? l2_distance(tr.final_state, exact) / scale : 0, "<", 1e-10));
  }
  if (s.casimir.name == "zero") checks.push_back(check("distance from the initial state", l2_distance(tr.final_state, y0), "<", 1e-300));
  for (std::size_t i = 0; i < s.config.watch.size(); ++i)
    if (std::abs(tr.diagnostics.front().watched[i]) > 1e-12)
      checks.push_back(check("relative drift of " + s.config.watch[i].name, tr.relative_drift(static_cast<int>(i)), "<", 1e-6));
  if (s.quadratic_s && docs.empty()) {
    const OrderStudy o = convergence_order(s.point, s.casimir, kOrderTime, kOrderDt);
    report["order_study"] = Json{{"t_final", kOrderTime},     {"dts", o.dts},
                                 {"differences", o.diffs},    {"orders", o.orders},
                                 {"rounding_floor", o.rounding_floor}, {"resolved", o.resolved}};
    checks.push_back(check("observed RK4 order", o.order, ">=", 3.8, o.resolved));
    const CasimirSpec partner = casimirs::quadratic(*s.quadratic_s + 1);
    const CommuteProbe pr = flow_commute_probe(s.point, s.casimir, partner, kProbeDts);
    report["commute_probe"] = Json{{"partner", partner.name},
                                   {"dts", pr.dts},
                                   {"gaps", pr.gaps},
                                   {"rounding_floor", pr.rounding_floor},
                                   {"exact_zero", pr.exact_zero}};
    checks.push_back(check("commuting-flow gap order", pr.order.value_or(0), ">=", 2.8, pr.order.has_value()));
  }
  report["checks"] = checks;
  for (const auto& c : checks)
    if (!c["resolved"].get<bool>())
      report["warnings"].push_back(c["name"].get<std::string>() + ": differences at the rounding floor, not certified");
  const bool ok = std::all_of(checks.begin(), checks.end(),
                              [](const Json& c) { return c["pass"].get<bool>() || !c["resolved"].get<bool>(); });
  report["completed"] = true;
  report["certified"] = ok;
  return {ok ? kOk : kFailed, report};
}

namespace {

std::string verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

void render_verify(const Json& r, std::ostream& os) {
  for (const auto& s : r["suites"]) {
    os << "[" << s["suite"].get<std::string>() << "] " << (s["certified"].get<bool>() ? "certified" : "NOT certified") << "\n";
    for (const auto& id : s["identities"]) {
      os << "  " << verdict(id["certified"].get<bool>()) << "  " << id["identity"].get<std::string>() << "  ("
         << id["instances"].get<int>() - id["failures"].get<int>() << "/" << id["instances"].get<int>() << ")\n";
      if (!id["witness"].get<std::string>().empty()) os << "        witness: " << id["witness"].get<std::string>() << "\n";
    }
    for (const auto& [k, v] : s["notes"].items()) os << "  note  " << k << ": " << v.get<std::string>() << "\n";
  }
}

void render_hierarchy(const Json& r, std::ostream& os) {
  os << "problem: " << r["problem"].get<std::string>() << "\n";
  if (r.contains("dstar")) {
    const Json& d = r["dstar"];
    os << "d_E*: " << (d["accepted"].get<bool>() ? "accepted" : "rejected") << "\n";
    if (!d["accepted"].get<bool>())
      os << "  " << d["failed_identity"].get<std::string>() << " on " << d["generator"].get<std::string>()
         << ": residual " << d["residual"].get<std::string>() << "\n";
  }
  if (r.contains("chain")) {
    const Json& c = r["chain"];
    os << "chain length " << c["length"].get<std::size_t>() << " (stop: " << c["hamiltonian_stop"].get<std::string>() << ")\n";
    for (const auto& h : c["hamiltonians"]) os << "  H_" << h["j"].get<int>() << " = " << h["text"].get<std::string>() << "\n";
    for (const auto& w : c["two_forms"]) os << "  w_" << w["j"].get<int>() << " = " << w["text"].get<std::string>() << "\n";
  }
  if (r.contains("certificate"))
    for (const auto& e : r["certificate"])
      os << "  " << verdict(e["zero"].get<bool>()) << "  " << e["identity"].get<std::string>()
         << (e["zero"].get<bool>() ? "" : "  residual " + e["residual"].get<std::string>()) << "\n";
  if (r.contains("error")) os << "error: " << r["error"].get<std::string>() << "\n";
}

void render_flow(const Json& r, std::ostream& os) {
  os << "problem: " << r["problem"].get<std::string>() << "  casimir: " << r["casimir"].get<std::string>()
     << "  dt: " << r["config"]["dt"].get<double>() << "  steps: " << r["config"]["steps"].get<int>() << "\n";
  if (r.contains("error")) {
    os << "error: " << r["error"]["message"].get<std::string>() << "\n";
    return;
  }
  const Json& cols = r["diagnostics"]["columns"];
  for (const auto& c : cols) os << std::setw(18) << c.get<std::string>();
  os << "\n";
  const Json& rows = r["diagnostics"]["rows"];
  const std::size_t stride = std::max<std::size_t>(1, rows.size() / 10);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i % stride != 0 && i + 1 != rows.size()) continue;
    for (const auto& v : rows[i]) os << std::setw(18) << std::setprecision(9) << v.get<double>();
    os << "\n";
  }
  for (const auto& w : r["warnings"]) os << "warning: " << w.get<std::string>() << "\n";
  for (const auto& c : r["checks"])
    os << (c["resolved"].get<bool>() ? verdict(c["pass"].get<bool>()) : std::string("SKIP")) << "  " << c["name"].get<std::string>() << " = " << c["value"].get<double>() << " ("
       << c["relation"].get<std::string>() << " " << c["threshold"].get<double>() << ")\n";
}

}  // namespace

std::string render(const Json& report, Format f) {
  if (f == Format::Json) return report.dump(2) + "\n";
  std::ostringstream os;
  const std::string cmd = report["command"].get<std::string>();
  os << "cabench " << cmd << "  schema " << report["schema"].get<std::string>() << "  seed " << report["seed"].get<std::uint64_t>()
     << "\n";
  if (cmd == "verify") render_verify(report, os);
  if (cmd == "hierarchy") render_hierarchy(report, os);
  if (cmd == "flow") render_flow(report, os);
  os << (report.value("certified", false) ? "result: certified" : "result: NOT certified") << "\n";
  return os.str();
}

}  // namespace cab::cli
