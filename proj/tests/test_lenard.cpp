#include <doctest.h>

#include "cab/error.hpp"
#include "cab/lenard.hpp"
#include "cab/random.hpp"

using namespace cab;

namespace {

const Ring R4 = chart(4);

FPoly xv(int j) { return FPoly::coordinate(R4, j); }

// 1/2 (a (x1^2 + y1^2) + b (x2^2 + y2^2)).
FPoly quad(const Rational& a, const Rational& b) {
  const CRat h(Rational(1, 2));
  return h * CRat(a) * (xv(0) * xv(0) + xv(1) * xv(1)) + h * CRat(b) * (xv(2) * xv(2) + xv(3) * xv(3));
}

Rational power(const Rational& a, int k) {
  Rational r = 1;
  for (int i = 0; i < k; ++i) r *= a;
  return r;
}

// Polynomial in the variables (offset, offset+1) of R^4.
FPoly pair_poly(InstanceGenerator& gen, int offset) {
  SparseShape s;
  s.mode_radius = 3;
  s.complex = false;
  FPoly f = gen.fpoly(chart(2), s);
  FPoly out(R4);
  for (const auto& [idx, c] : f.terms()) {
    std::vector<int> k(4, 0);
    k[static_cast<std::size_t>(offset)] = idx.torus[0];
    k[static_cast<std::size_t>(offset + 1)] = idx.torus[1];
    out += FPoly::term(R4, k, 0, c);
  }
  return out;
}

FPoly any_poly(InstanceGenerator& gen) {
  SparseShape s;
  s.mode_radius = 2;
  s.complex = false;
  return gen.fpoly(R4, s);
}

}  // namespace

TEST_CASE("Hamiltonian detection") {
  const Ring R2 = chart(2);
  FPAlgebroid e = FPAlgebroid::tangent(R2);
  FPoly x = FPoly::coordinate(R2, 0), y = FPoly::coordinate(R2, 1);
  KForm w = KForm::basis(R2, 2, {0, 1});
  HamiltonianResult h = hamiltonian_of(Section(std::vector<FPoly>{-y, x}), w, e);
  CHECK(h.status == HamStatus::Global);
  CHECK(h.h == CRat(Rational(1, 2)) * (x * x + y * y));

  CHECK(hamiltonian_of(Section::zero(R2, 2), w, e).h.is_zero());

  LenardProblem t = presets::torus_translation();
  HamiltonianResult loc = hamiltonian_of(t.seed, t.omega, t.algebroid);
  CHECK(loc.status == HamStatus::LocalOnly);
  CHECK(loc.obstruction == -KForm::basis(torus(2), 2, {1}));
  CHECK_THROWS_AS(build_hierarchy(t.algebroid, t.q, t.seed, t.omega, 2), StructureError);

  // x dx^dy is not invariant along d_x.
  Section dx(std::vector<FPoly>{FPoly::constant(R2, 1), FPoly(R2)});
  CHECK_THROWS_AS(hamiltonian_of(dx, x * w, e), StructureError);
}

TEST_CASE("d_E preimage through a constant frame change") {
  const Ring R2 = chart(2);
  // rho(A1) = d_x + d_y, rho(A2) = d_y - d_x: constant, invertible, abelian.
  std::vector<VecField> anchor{VecField({FPoly::constant(R2, 1), FPoly::constant(R2, 1)}),
                               VecField({FPoly::constant(R2, -1), FPoly::constant(R2, 1)})};
  std::vector<std::vector<std::vector<FPoly>>> c(2, std::vector<std::vector<FPoly>>(2, std::vector<FPoly>(2, FPoly(R2))));
  FPAlgebroid e("skew-frame", R2, anchor, c);
  InstanceGenerator gen(3001);
  SparseShape s;
  s.mode_radius = 3;
  for (int t = 0; t < 30; ++t) {
    KForm theta = gen.kform(R2, 2, 0, s);
    KForm w = d_E(theta, e);
    EPreimage p = d_E_preimage(w, e);
    REQUIRE(p.supported);
    CHECK(p.exact());
    CHECK(d_E(p.potential, e) == w);
  }
  CHECK_FALSE(d_E_preimage(FPAlgebroid::so3_zero_anchor().coframe(0), FPAlgebroid::so3_zero_anchor()).supported);
}

TEST_CASE("Lenard steps on the oscillator") {
  const Rational l1 = 2, l2 = 3;
  LenardProblem p = presets::oscillator(l1, l2);
  DStar ds = build_dstar(p.q, p.algebroid);
  REQUIRE(ds.accepted);
  FPoly h = quad(1, 1);
  for (int j = 1; j <= 5; ++j) {
    CHECK(h == quad(power(l1, j - 1), power(l2, j - 1)));
    LenardStep s = lenard_step(h, ds, p.algebroid);
    CHECK(s.status == StepStatus::Ok);
    h = s.next;
  }
  DStar same = build_dstar(presets::oscillator(1, 1).q, p.algebroid);
  CHECK(lenard_step(quad(1, 1), same, p.algebroid).next == quad(1, 1));

  InstanceGenerator gen(3002);
  const OddDerivation de = de_differential(p.algebroid);
  for (int t = 0; t < 30; ++t) {
    FPoly f = pair_poly(gen, 0) + pair_poly(gen, 2);
    LenardStep s = lenard_step(f, ds, p.algebroid);
    CHECK(mean(s.next).is_zero());
    CHECK(de(KForm::function(s.next, 4)) == ds.op(KForm::function(f, 4)));
  }
  // Mixing the two pairs breaks d_E-closedness of d_E* H.
  CHECK_THROWS_AS(lenard_step(xv(0) * xv(2), ds, p.algebroid), StructureError);
}

TEST_CASE("oscillator hierarchy") {
  const Rational l1 = 2, l2 = 3;
  LenardProblem p = presets::oscillator(l1, l2);
  LenardState st = build_hierarchy(p.algebroid, p.q, p.seed, p.omega, p.cap);
  REQUIRE(st.hams.size() == 4);
  REQUIRE(st.omegas.size() == 4);
  REQUIRE(st.flows.size() == 4);
  CHECK(st.ham_stop == "cap");
  for (int j = 0; j < 4; ++j) {
    CHECK(st.hams[static_cast<std::size_t>(j)] == quad(power(l1, j), power(l2, j)));
    KForm w = CRat(power(l1, j)) * KForm::basis(R4, 4, {0, 1}) + CRat(power(l2, j)) * KForm::basis(R4, 4, {2, 3});
    CHECK(st.omegas[static_cast<std::size_t>(j)] == w);
  }
  CHECK(st.flows[0] == p.seed);

  LenardCertificate cert = certify(st);
  CHECK(cert.certified());
  CHECK(cert.first_failure().empty());
  // 4 w_j x 2 closedness + 4 relations + 4 * C(4,2) involutions + C(4,2) commutators.
  CHECK(cert.entries.size() == 8 + 4 + 24 + 6);
}

TEST_CASE("degenerate chains") {
  LenardProblem z = presets::oscillator_zero_q();
  LenardState st = build_hierarchy(z.algebroid, z.q, z.seed, z.omega, z.cap);
  CHECK(st.hams.size() == 1);
  CHECK(st.omegas.size() == 1);
  CHECK(st.ham_stop == "d_E* H vanishes");
  CHECK(st.omega_stop == "d_E Q* beta vanishes");
  CHECK(certify(st).certified());

  LenardProblem bad = presets::oscillator_split_pairs();
  LenardState sb = build_hierarchy(bad.algebroid, bad.q, bad.seed, bad.omega, bad.cap);
  LenardCertificate cert = certify(sb);
  CHECK_FALSE(cert.certified());
  CHECK(cert.first_failure() == "i_K w_2 + d_E H_2");
  bool involution_fails = false;
  for (const auto& e : cert.entries)
    if (e.identity == "{H_1,H_2}_1") involution_fails = !e.zero;
  CHECK(involution_fails);
}

TEST_CASE("Poisson brackets of the hierarchy") {
  LenardProblem p = presets::oscillator();
  LenardState st = build_hierarchy(p.algebroid, p.q, p.seed, p.omega, p.cap);
  CHECK(poisson_s(xv(0), xv(1), 0, st) == FPoly::constant(R4, 1));
  CHECK(poisson_s(xv(2), xv(3), 0, st) == FPoly::constant(R4, 1));
  CHECK(poisson_s(xv(0), xv(1), 1, st) == FPoly::constant(R4, Rational(1, 2)));
  CHECK(poisson_s(st.hams[0], st.hams[1], 0, st).is_zero());

  InstanceGenerator gen(3003);
  for (int t = 0; t < 30; ++t) {
    FPoly f = any_poly(gen), g = any_poly(gen), h = any_poly(gen);
    const int s = t % 4;
    CHECK(poisson_s(f, f, s, st).is_zero());
    CHECK(poisson_s(f, g, s, st) == -poisson_s(g, f, s, st));
    CHECK(poisson_s(f + h, g, s, st) == poisson_s(f, g, s, st) + poisson_s(h, g, s, st));
    CHECK(poisson_s(f * h, g, s, st) == f * poisson_s(h, g, s, st) + h * poisson_s(f, g, s, st));
  }
}

TEST_CASE("degenerate two-form has no Hamiltonian sections") {
  LenardProblem p = presets::oscillator();
  KForm w = KForm::basis(R4, 4, {0, 1});
  CHECK_THROWS_AS(hamiltonian_section(xv(0), w, p.algebroid), KernelError);
}
