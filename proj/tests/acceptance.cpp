// One PASS/FAIL line per acceptance criterion; exit status is the number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cab/cli/workbench.hpp"
#include "cab/random.hpp"
#include "cab/suites.hpp"

using namespace cab;

namespace {

// Pinned tolerances.
constexpr int kMinInstances = 100;
constexpr double kJacobiSeconds = 120;
constexpr double kLenardSeconds = 60;
constexpr double kClosedFormRelError = 1e-10;
constexpr double kDriftBound = 1e-6;
constexpr double kMinRk4Order = 3.8;
constexpr double kMinCommuteOrder = 2.8;
constexpr int kRandomQ = 25;
const std::vector<std::uint64_t> kSeeds{1, 2, 3};

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (pass) detail = what;
    pass = false;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const IdentityReport* find(const SuiteResult& r, const std::string& identity) {
  for (const auto& id : r.identities)
    if (id.identity == identity) return &id;
  return nullptr;
}

void require_exact(Verdict& v, const SuiteResult& r, const std::string& identity, int min_instances) {
  const IdentityReport* id = find(r, identity);
  if (!id) return v.require(false, "missing identity '" + identity + "'");
  v.require(id->instances >= min_instances, identity + ": only " + std::to_string(id->instances) + " instances");
  v.require(id->certified(), identity + ": nonzero residual " + id->witness);
}

SuiteConfig suite_config(std::uint64_t seed) { return {seed, kMinInstances, 2}; }

Verdict exact_jacobi() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  const SuiteResult c = courant_suite(suite_config(1), default_algebras());
  const SuiteResult s = semidirect_suite(suite_config(1));
  for (const char* id : {"vf_bracket Jacobi", "reduced_bracket Jacobi (certified P)", "sympl_bracket Jacobi [aff1]",
                         "sympl_bracket Jacobi [filiform4]"})
    require_exact(v, c, id, kMinInstances);
  require_exact(v, s, "sd_bracket Jacobi", kMinInstances);
  require_exact(v, s, "R_bracket Jacobi (loop splitting)", kMinInstances);
  const double dt = seconds_since(t0);
  v.require(dt < kJacobiSeconds, "took " + std::to_string(dt) + " s");
  if (v.pass) v.detail = "6 brackets x " + std::to_string(kMinInstances) + " instances, zero residual, " + std::to_string(dt) + " s";
  return v;
}

Verdict pairing_and_antisymmetry() {
  Verdict v;
  const SuiteResult s = semidirect_suite(suite_config(1));
  require_exact(v, s, "pairing invariance", kMinInstances);
  require_exact(v, s, "lie_poisson antisymmetry", kMinInstances);
  require_exact(v, s, "deformed_lie_poisson antisymmetry (loop splitting)", kMinInstances);
  if (v.pass) v.detail = "invariance and both antisymmetries exact on " + std::to_string(kMinInstances) + " cases";
  return v;
}

Verdict courant_jacobiator() {
  Verdict v;
  std::string tallies;
  for (std::uint64_t seed : kSeeds) {
    const SuiteResult c = courant_suite(suite_config(seed), {});
    require_exact(v, c, "Courant Jacobiator field component vanishes", kMinInstances);
    require_exact(v, c, "Courant Jacobiator form component has a potential", kMinInstances);
    require_exact(v, c, "Courant Jacobiator equals -1/6 d(cyclic pairing)", kMinInstances);
    const std::string other = c.notes.at("jacobiator class other");
    v.require(other == "0", "seed " + std::to_string(seed) + ": " + other + " Jacobiators outside {zero, exact-form}");
    tallies += (tallies.empty() ? "" : ", ") + std::string("seed ") + std::to_string(seed) + ": " +
               c.notes.at("jacobiator class exact-form") + " exact-form/" + c.notes.at("jacobiator class zero") + " zero/" +
               c.notes.at("jacobiator zero-mode obstruction nonzero") + " obstructed";
  }
  if (v.pass) v.detail = "field part zero, form part d-exact, zero-mode obstruction reported; " + tallies;
  return v;
}

QMap random_q(InstanceGenerator& gen, Ring r, int m) {
  SparseShape s;
  s.max_terms = 2;
  s.mode_radius = 1;
  s.complex = false;
  std::vector<std::vector<std::vector<FPoly>>> b(m, std::vector<std::vector<FPoly>>(m, std::vector<FPoly>(m, FPoly(r))));
  for (int e = 0; e < 3; ++e) b[gen.uniform(0, m - 1)][gen.uniform(0, m - 1)][gen.uniform(0, m - 1)] += gen.fpoly(r, s);
  return QMap(b);
}

Verdict algebroid_complex() {
  Verdict v;
  const SuiteResult a = algebroid_suite(suite_config(1), default_algebroids());
  for (const char* n : {"tangent-t1", "so3-zero-anchor", "oscillator-r4"}) require_exact(v, a, std::string("d_E^2 = 0 [") + n + "]", kMinInstances);
  require_exact(v, a, "d_E* certified [oscillator-r4]", 1);
  require_exact(v, a, "curvature of Q vanishes [oscillator-r4]", 1);

  InstanceGenerator gen(1);
  const FPAlgebroid osc = FPAlgebroid::oscillator();
  int rejected = 0, drawn = 0;
  while (drawn < kRandomQ) {
    const QMap q = random_q(gen, osc.ring(), osc.rank());
    bool zero = true;
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) zero = zero && q.q(j, k, l).is_zero();
    if (zero) continue;
    ++drawn;
    const DStar ds = build_dstar(q, osc);
    if (!ds.accepted && !ds.residual.is_zero()) ++rejected;
  }
  v.require(rejected == kRandomQ, std::to_string(kRandomQ - rejected) + " random Q accepted or rejected with zero residual");
  if (v.pass)
    v.detail = "d_E^2 = 0 on 3 algebroids, block-constant Q accepted and flat, " + std::to_string(rejected) + "/" +
               std::to_string(kRandomQ) + " random Q rejected with nonzero residual";
  return v;
}

Verdict lenard_certificate() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  const Rational l1 = 2, l2 = 3;
  const LenardProblem p = presets::oscillator(l1, l2, 4);
  const LenardState st = build_hierarchy(p.algebroid, p.q, p.seed, p.omega, p.cap);
  const LenardCertificate cert = certify(st);
  const double dt = seconds_since(t0);
  v.require(st.hams.size() == 4, "chain length " + std::to_string(st.hams.size()));
  const Ring r = p.algebroid.ring();
  auto x = [&](int j) { return FPoly::coordinate(r, j); };
  Rational a = 1, b = 1;
  for (std::size_t j = 0; j < st.hams.size(); ++j) {
    const FPoly expected =
        CRat(a / 2) * (x(0) * x(0) + x(1) * x(1)) + CRat(b / 2) * (x(2) * x(2) + x(3) * x(3));
    v.require(st.hams[j] == expected, "H_" + std::to_string(j + 1) + " = " + to_string(st.hams[j]));
    a *= l1;
    b *= l2;
  }
  v.require(cert.certified(), "residual in " + cert.first_failure());
  v.require(dt < kLenardSeconds, "took " + std::to_string(dt) + " s");
  if (v.pass)
    v.detail = "m = 4, H_j matches closed form, " + std::to_string(cert.entries.size()) + " residuals zero, " + std::to_string(dt) + " s";
  return v;
}

double check_value(const io::Json& report, const std::string& name) {
  for (const auto& c : report["checks"])
    if (c["name"] == name && c["resolved"].get<bool>()) return c["value"].get<double>();
  return std::nan("");
}

Verdict loop_flow() {
  Verdict v;
  cli::WorkbenchConfig cfg;
  cfg.preset = "linear-translation";
  const io::Json lin = cli::cmd_flow(cfg).report;
  v.require(lin["config"]["steps"] == 100 && lin["config"]["dt"] == 1e-3, "translation run is not 100 steps at dt 1e-3");
  const double rel = check_value(lin, "closed-form relative error");
  v.require(rel < kClosedFormRelError, "closed-form relative error " + std::to_string(rel));

  cfg.preset = "quadratic";
  const io::Json q = cli::cmd_flow(cfg).report;
  v.require(q["config"]["steps"] == 1000, "quadratic run is not 1000 steps");
  double drift = 0;
  bool watched = false;
  for (const auto& c : q["checks"])
    if (c["name"].get<std::string>().rfind("relative drift of ", 0) == 0) {
      watched = true;
      drift = std::max(drift, c["value"].get<double>());
    }
  v.require(watched && drift < kDriftBound, "watched drift " + std::to_string(drift));
  const double order = check_value(q, "observed RK4 order");
  v.require(order >= kMinRk4Order, "RK4 order " + std::to_string(order));
  const double commute = check_value(q, "commuting-flow gap order");
  v.require(commute >= kMinCommuteOrder, "commuting gap order " + std::to_string(commute));
  char buf[256];
  std::snprintf(buf, sizeof buf, "closed-form rel err %.2e, drift %.2e, RK4 order %.3f, commuting gap order %.3f", rel, drift,
                order, commute);
  if (v.pass) v.detail = buf;
  return v;
}

Verdict determinism() {
  Verdict v;
  cli::WorkbenchConfig cfg;
  cfg.seed = 20261016;
  const std::vector<std::pair<std::string, std::function<cli::CommandResult(const cli::WorkbenchConfig&)>>> cmds{
      {"verify", cli::cmd_verify}, {"hierarchy", cli::cmd_hierarchy}, {"flow", cli::cmd_flow}};
  for (const auto& [name, cmd] : cmds)
    for (auto f : {cli::Format::Json, cli::Format::Text})
      v.require(cli::render(cmd(cfg).report, f) == cli::render(cmd(cfg).report, f), name + " reports differ between runs");
  cfg.preset = "quadratic";
  v.require(cli::render(cli::cmd_flow(cfg).report, cli::Format::Json) == cli::render(cli::cmd_flow(cfg).report, cli::Format::Json),
            "quadratic flow reports differ between runs");
  if (v.pass) v.detail = "verify, hierarchy and flow reports byte-identical for seed " + std::to_string(cfg.seed);
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"exact Jacobi", exact_jacobi},
      {"pairing invariance and antisymmetry", pairing_and_antisymmetry},
      {"Courant Jacobiator diagnostic", courant_jacobiator},
      {"algebroid complex", algebroid_complex},
      {"Lenard certificate on the oscillator", lenard_certificate},
      {"loop flow integrity", loop_flow},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    failures += v.pass ? 0 : 1;
    std::printf("%s  [%zu] %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
