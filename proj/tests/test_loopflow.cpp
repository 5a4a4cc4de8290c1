#include <doctest.h>

#include <cmath>
#include <map>

#include "cab/error.hpp"
#include "cab/loopflow.hpp"
#include "cab/random.hpp"
#include "cab/semidirect.hpp"

using namespace cab;

namespace {

const Ring T1 = torus(1);
const Window kBand{1, -2, 1};

LoopPoint sample(InstanceGenerator& gen, const Window& w, int terms = 4) {
  SparseShape s;
  s.max_terms = terms;
  s.mode_radius = w.radius;
  s.loop_lo = w.lo;
  s.loop_hi = w.hi;
  s.num_bound = 2;
  s.den_bound = 2;
  return LoopPoint(gen.apair(T1, s), w);
}

EPair loop_pair(InstanceGenerator& gen, int lo, int hi) {
  SparseShape s;
  s.loop_lo = lo;
  s.loop_hi = hi;
  return gen.epair(T1, s);
}

// Mode-wise coefficients of one T^1 component: (wave number, loop power) -> c.
using Modes = std::map<std::pair<int, int>, CRat>;

Modes modes(const FPoly& f) {
  Modes m;
  for (const auto& [idx, c] : f.terms()) m[{idx.torus[0], idx.loop}] = c;
  return m;
}

FPoly from_modes(const Modes& m, const Window& w) {
  FPoly f(T1);
  for (const auto& [k, c] : m)
    if (std::abs(k.first) <= w.radius && k.second >= w.lo && k.second <= w.hi) f += FPoly::term(T1, {k.first}, k.second, c);
  return f;
}

// Hand expansion of [R lambda^s mu, mu] on T^1 with
// [e_k, e_j] = i(j-k) e_{k+j} and ad*_{e_j} e_k = -i(k+2j) e_{k+j}.
APair quadratic_rhs_oracle(const LoopPoint& pt, int s) {
  const Modes p = modes(pt.value().field[0]), l = modes(pt.value().form[0]);
  const CRat I(0, 1);
  Modes fp, fl;
  auto sign = [](int m) { return CRat(m >= 0 ? 1 : -1); };
  for (const auto& [ka, a] : p)
    for (const auto& [kb, b] : p) {
      const int k = ka.first, j = kb.first, m = ka.second + s;
      fp[{k + j, m + kb.second}] += sign(m) * a * b * I * CRat(j - k);
    }
  for (const auto& [ka, alpha] : l)
    for (const auto& [kb, b] : p) {
      const int k = ka.first, j = kb.first, m = ka.second + s;
      fl[{k + j, m + kb.second}] += sign(m) * alpha * b * I * CRat(-(k + 2 * j));
    }
  for (const auto& [ka, a] : p)
    for (const auto& [kb, beta] : l) {
      const int k = ka.first, j = kb.first, m = ka.second + s;
      fl[{k + j, m + kb.second}] += sign(m) * a * beta * I * CRat(j + 2 * k);
    }
  APair r = APair::zero(T1);
  r.field[0] = from_modes(fp, pt.window());
  r.form[0] = from_modes(fl, pt.window());
  return r;
}

PairMap splitting() {
  return [](const APair& u) { return to_apair(loop_split(to_epair(u))); };
}

}  // namespace

TEST_CASE("loop projectors") {
  const FPoly f = FPoly::lambda(T1, 2) + FPoly::lambda(T1, -1);
  CHECK(project_pm(f, LoopSign::Plus) == FPoly::lambda(T1, 2));
  CHECK(project_pm(FPoly::constant(T1, 5), LoopSign::Minus).is_zero());

  InstanceGenerator gen(4001);
  const BlockOperator r = BlockOperator::loop_splitting(1);
  for (int t = 0; t < 100; ++t) {
    const EPair u = loop_pair(gen, -3, 3);
    const EPair p = project_pm(u, LoopSign::Plus), m = project_pm(u, LoopSign::Minus);
    CHECK(p + m == u);
    CHECK(project_pm(p, LoopSign::Minus).is_zero());
    CHECK(project_pm(m, LoopSign::Plus).is_zero());
    CHECK(loop_split(loop_split(u)) == u);
    CHECK(to_apair(loop_split(u)) == r.apply(to_apair(u)));
  }
}

TEST_CASE("deformed Lie-Poisson bracket is antisymmetric at loop points") {
  InstanceGenerator gen(4002);
  for (int t = 0; t < 100; ++t) {
    const EPair x = loop_pair(gen, -2, 1), y = loop_pair(gen, -2, 1);
    const LoopPoint pt = sample(gen, Window{2, -2, 2});
    CHECK(deformed_lie_poisson(x, y, pt.value(), splitting(), PairingGrade::Residue) ==
          -deformed_lie_poisson(y, x, pt.value(), splitting(), PairingGrade::Residue));
  }
}

TEST_CASE("loop points respect their window") {
  APair u = APair::zero(T1);
  u.field[0] = FPoly::term(T1, {2}, 0, CRat(1));
  CHECK_THROWS_AS(LoopPoint(u, Window{1, -1, 1}), DomainError);
  u.field[0] = FPoly::term(T1, {1}, 2, CRat(1));
  CHECK_THROWS_AS(LoopPoint(u, Window{1, -1, 1}), DomainError);
  CHECK_NOTHROW(LoopPoint(u, Window{1, -1, 2}));
  CHECK_THROWS_AS(LoopPoint(APair::zero(chart(1)), kBand), DomainError);
}

TEST_CASE("exact flow right-hand side") {
  InstanceGenerator gen(4003);
  CHECK(flow_rhs(sample(gen, kBand), casimirs::zero()).tangent.is_zero());

  const Window wide{2, -2, 2};
  for (int t = 0; t < 3; ++t) {
    const LoopPoint pt = sample(gen, wide, 3);
    for (int s : {-1, 0, 1}) CHECK(flow_rhs(pt, casimirs::quadratic(s)).tangent == quadratic_rhs_oracle(pt, s));
  }

  for (int t = 0; t < 50; ++t) {
    const LoopPoint pt = sample(gen, t % 2 ? wide : kBand);
    for (int s : {0, 1}) {
      const CasimirSpec g = casimirs::quadratic(s);
      const FlowRhs r = flow_rhs(pt, g);
      CHECK(r.retained_norm2 + r.leak_norm2 == r.pre_norm2);
      // The gradient of a Casimir commutes with the point.
      CHECK(sd_bracket(to_apair(g.gradient(pt.value())), pt.value()).is_zero());
      if (pt.window() == kBand) {
        // sl(2) truncation: the leak is annihilated by the window and the band is invariant.
        CHECK(r.leak.field.is_zero());
        for (const auto& [idx, c] : r.leak.form[0].terms()) CHECK((idx.loop >= kBand.lo && idx.loop <= kBand.hi));
        for (int w : {-1, 0, 1, 2})
          CHECK(sd_pairing(to_apair(casimirs::quadratic(w).gradient(pt.value())), r.tangent, PairingGrade::Residue)
                    .is_zero());
      }
    }
  }
}

TEST_CASE("compiled flow reproduces the exact rhs") {
  InstanceGenerator gen(4004);
  for (int s : {0, 1}) {
    const CompiledFlow f(T1, kBand, casimirs::quadratic(s));
    CHECK(f.size() == 2 * 3 * 4);
    for (int t = 0; t < 10; ++t) {
      const LoopPoint pt = sample(gen, kBand);
      const FlowRhs r = flow_rhs(pt, casimirs::quadratic(s));
      const CompiledFlow::Eval e = f.eval(f.encode(pt));
      CHECK(l2_distance(e.tangent, f.encode(LoopPoint(r.tangent, kBand))) < 1e-12);
      CHECK(std::abs(e.leak2 - r.leak_norm2.get_d()) < 1e-12);
      CHECK(std::abs(e.retained2 - r.retained_norm2.get_d()) < 1e-12);
    }
  }
  CasimirSpec cubic = casimirs::quadratic(0);
  cubic.name = "cubic";
  cubic.gradient = [](const APair& u) {
    return sd_pairing(u, u, PairingGrade::Residue) * to_epair(u);
  };
  CHECK_THROWS_AS(CompiledFlow(T1, kBand, cubic), StructureError);
}

TEST_CASE("translation flow matches its closed form") {
  InstanceGenerator gen(4005);
  const std::vector<Rational> c{Rational(3, 2)};
  const CompiledFlow f(T1, kBand, casimirs::translation(T1, c));
  for (int t = 0; t < 5; ++t) {
    const State y0 = f.encode(sample(gen, kBand));
    FlowConfig cfg;
    cfg.window = kBand;
    const Trajectory tr = integrate(f, y0, cfg);
    const State exact = translation_solution(f, y0, c, cfg.dt * cfg.steps);
    CHECK(l2_distance(tr.final_state, exact) < 1e-10 * l2_norm(exact));
    CHECK(tr.snapshots.size() == 2);
    CHECK(tr.diagnostics.size() == 101);
  }
}

TEST_CASE("zero Casimir keeps the point fixed") {
  InstanceGenerator gen(4006);
  const LoopPoint pt = sample(gen, kBand);
  FlowConfig cfg;
  cfg.window = kBand;
  cfg.snapshot_every = 10;
  const Trajectory tr = integrate(pt, casimirs::zero(), cfg);
  CHECK(tr.snapshots.size() == 11);
  for (const auto& [step, y] : tr.snapshots) CHECK(y == tr.snapshots.front().second);
}

TEST_CASE("quadratic flow conserves the other Casimirs") {
  InstanceGenerator gen(4007);
  FlowConfig cfg;
  cfg.window = kBand;
  cfg.steps = 1000;
  cfg.leak_tolerance = 1e6;
  cfg.watch = {casimirs::quadratic(0), casimirs::quadratic(1), casimirs::quadratic(-1)};
  const LoopPoint pt = sample(gen, kBand, 6);
  const Trajectory tr = integrate(pt, casimirs::quadratic(0), cfg);
  REQUIRE(std::abs(tr.diagnostics.front().watched[0]) > 1e-3);
  REQUIRE(std::abs(tr.diagnostics.front().watched[1]) > 1e-3);
  CHECK(tr.relative_drift(0) < 1e-6);
  CHECK(tr.relative_drift(1) < 1e-6);
  CHECK(l2_distance(tr.final_state, tr.snapshots.front().second) > 1e-3);
  CHECK(tr.warnings.empty());

  const OrderStudy s = convergence_order(pt, casimirs::quadratic(0), 1.0, 0.1);
  CHECK(s.resolved);
  CHECK(s.order >= 3.8);
  CHECK(s.orders.size() == 2);
}

TEST_CASE("commuting flows") {
  InstanceGenerator gen(4008);
  const LoopPoint pt = sample(gen, kBand, 6);
  const std::vector<double> dts{0.2, 0.1, 0.05};

  const CommuteProbe same = flow_commute_probe(pt, casimirs::quadratic(0), casimirs::quadratic(0), dts);
  CHECK(same.exact_zero);
  CHECK_FALSE(same.order.has_value());

  const CommuteProbe shifts = flow_commute_probe(pt, casimirs::translation(T1, {Rational(1)}),
                                                 casimirs::translation(T1, {Rational(-2, 3)}), dts);
  for (double g : shifts.gaps) CHECK(g < 1e-13);
  CHECK_FALSE(shifts.order.has_value());

  const CommuteProbe q = flow_commute_probe(pt, casimirs::quadratic(0), casimirs::quadratic(1), dts);
  REQUIRE(q.order.has_value());
  CHECK(*q.order >= 2.8);

  // d_x and e^{ix} d_x do not commute: the gap is second order.
  EPair wave = EPair::zero(T1);
  wave.field[0] = FPoly::coordinate(T1, 0);
  const CommuteProbe nc = flow_commute_probe(pt, casimirs::translation(T1, {Rational(1)}),
                                             casimirs::linear("wave", wave), dts);
  REQUIRE(nc.order.has_value());
  CHECK(*nc.order > 1.8);
  CHECK(*nc.order < 2.2);
}

TEST_CASE("flow configuration and failures") {
  InstanceGenerator gen(4009);
  const LoopPoint pt = sample(gen, kBand, 6);
  FlowConfig cfg;
  cfg.window = kBand;
  cfg.dt = 0;
  CHECK_THROWS_AS(integrate(pt, casimirs::zero(), cfg), DomainError);
  cfg.dt = 1e-3;
  cfg.window = Window{2, -2, 1};
  CHECK_THROWS_AS(integrate(pt, casimirs::zero(), cfg), DomainError);

  cfg.window = kBand;
  cfg.steps = 5;
  const Trajectory hard = integrate(pt, casimirs::quadratic(0), cfg);
  CHECK_FALSE(hard.warnings.empty());
  cfg.policy = ProjectionPolicy::Strict;
  CHECK_THROWS_AS(integrate(pt, casimirs::quadratic(0), cfg), DomainError);

  cfg.policy = ProjectionPolicy::Hard;
  cfg.leak_tolerance = 1e300;
  cfg.dt = 50;
  cfg.steps = 200;
  try {
    integrate(pt, casimirs::quadratic(0), cfg);
    FAIL("expected a numerical abort");
  } catch (const NumericalError& e) {
    CHECK(e.step() > 0);
    CHECK(e.step() <= 200);
  }
}
