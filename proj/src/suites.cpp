#include "cab/suites.hpp"

#include <algorithm>
#include <sstream>

#include "cab/random.hpp"
#include "cab/semidirect.hpp"

namespace cab {

bool SuiteResult::certified() const {
  return std::all_of(identities.begin(), identities.end(), [](const IdentityReport& r) { return r.certified(); });
}

namespace {

template <class T>
std::string components_text(const T& v) {
  std::ostringstream os;
  for (int j = 0; j < v.size(); ++j) os << (j ? "; " : "") << to_string(v[j]);
  return os.str();
}

std::string pair_text(const EPair& u) { return "form " + components_text(u.form) + " | field " + components_text(u.field); }
std::string pair_text(const APair& u) { return "field " + components_text(u.field) + " | form " + components_text(u.form); }

std::string lin_text(const LinForm& f) {
  std::ostringstream os;
  for (std::size_t j = 0; j < f.size(); ++j) os << (j ? ", " : "") << to_string(f[j]);
  return "(" + os.str() + ")";
}

bool is_zero(const LinForm& f) {
  return std::all_of(f.begin(), f.end(), [](const Rational& x) { return sgn(x) == 0; });
}

IdentityReport named(std::string identity) {
  IdentityReport r;
  r.identity = std::move(identity);
  return r;
}

SparseShape small(int radius) {
  SparseShape s;
  s.max_terms = 2;
  s.mode_radius = radius;
  return s;
}

SparseShape loop_shape(int radius) {
  SparseShape s = small(radius);
  s.loop_lo = -2;
  s.loop_hi = 1;
  return s;
}

FPoly sym_pair(const EPair& u, const EPair& v) { return contract(u.form, v.field) + contract(v.form, u.field); }

}  // namespace

SuiteResult courant_suite(const SuiteConfig& cfg, const std::vector<NamedAlgebra>& algebras) {
  SuiteResult out;
  out.suite = "courant";
  InstanceGenerator gen(cfg.seed);
  const Ring t2 = torus(2), r2 = chart(2);
  const SparseShape shape = small(cfg.mode_radius);

  IdentityReport vf = named("vf_bracket Jacobi");
  for (int t = 0; t < cfg.instances; ++t) {
    const Ring r = t % 2 ? r2 : t2;
    VecField a = gen.field(r, shape), b = gen.field(r, shape), c = gen.field(r, shape);
    VecField j = cyclic_sum(vf_bracket, a, b, c);
    vf.record(j.is_zero(), components_text(j));
  }
  out.identities.push_back(vf);

  IdentityReport field = named("Courant Jacobiator field component vanishes");
  IdentityReport exact = named("Courant Jacobiator form component has a potential");
  IdentityReport formula = named("Courant Jacobiator equals -1/6 d(cyclic pairing)");
  std::map<JacobiClass, int> tally;
  int obstructed = 0;
  std::string obstruction;
  for (int t = 0; t < cfg.instances; ++t) {
    const Ring r = t % 2 ? r2 : t2;
    EPair u = gen.epair(r, shape), v = gen.epair(r, shape), w = gen.epair(r, shape);
    const JacobiatorReport rep = jacobiator(u, v, w);
    ++tally[rep.cls];
    field.record(rep.value.field.is_zero(), components_text(rep.value.field));
    exact.record(rep.cls != JacobiClass::Other && rep.form_preimage.exact(), pair_text(rep.value));
    if (!rep.form_preimage.obstruction.is_zero() && obstructed++ == 0) obstruction = to_string(rep.form_preimage.obstruction);
    const FPoly t6 = sym_pair(courant_bracket(u, v), w) + sym_pair(courant_bracket(v, w), u) +
                     sym_pair(courant_bracket(w, u), v);
    const OneForm diff = rep.value.form - CRat(Rational(-1, 6)) * gradient(t6);
    formula.record(diff.is_zero(), components_text(diff));
  }
  out.identities.insert(out.identities.end(), {field, exact, formula});
  for (JacobiClass c : {JacobiClass::Zero, JacobiClass::ExactForm, JacobiClass::Other})
    out.notes["jacobiator class " + to_string(c)] = std::to_string(tally[c]);
  out.notes["jacobiator zero-mode obstruction nonzero"] = std::to_string(obstructed);
  if (obstructed) out.notes["jacobiator first obstruction"] = obstruction;

  IdentityReport reduced = named("reduced_bracket Jacobi (certified P)");
  IdentityReport anchor = named("P is a bracket homomorphism (certified P)");
  for (int t = 0; t < cfg.instances; ++t) {
    const bool poly = t % 2 == 1;
    const Ring r = poly ? r2 : t2;
    const FPoly p12 = poly ? gen.fpoly(r2, small(cfg.mode_radius)) : FPoly::constant(t2, gen.nonzero_rational(3, 3));
    const auto cp = CertifiedPoisson::certify(PoissonBivector({{FPoly(r), p12}, {-p12, FPoly(r)}}));
    OneForm a = gen.form(r, shape), b = gen.form(r, shape), c = gen.form(r, shape);
    auto br = [&cp](const OneForm& x, const OneForm& y) { return reduced_bracket(x, y, cp); };
    const OneForm j = cyclic_sum(br, a, b, c);
    reduced.record(j.is_zero(), components_text(j));
    const VecField h = anchor_check(a, b, cp.bivector());
    anchor.record(h.is_zero(), components_text(h));
  }
  out.identities.insert(out.identities.end(), {reduced, anchor});

  for (const auto& na : algebras) {
    IdentityReport jac = named("sympl_bracket Jacobi [" + na.name + "]");
    IdentityReport routes = named("sympl_bracket coadjoint and contraction routes agree [" + na.name + "]");
    const int m = na.algebra.dim();
    auto draw = [&gen, m] {
      LinForm f;
      for (int k = 0; k < m; ++k) f.push_back(gen.rational(4, 3));
      return f;
    };
    for (int t = 0; t < cfg.instances; ++t) {
      const LinForm a = draw(), b = draw(), c = draw();
      const LinForm res = anchored_jacobi_residual(a, b, c, na.algebra, na.omega.anchor());
      jac.record(is_zero(res), lin_text(res));
      const LinForm x = sympl_bracket(a, b, na.algebra, na.omega);
      const LinForm y = sympl_bracket_contracted(a, b, na.algebra, na.omega);
      routes.record(x == y, lin_text(x) + " vs " + lin_text(y));
    }
    out.identities.insert(out.identities.end(), {jac, routes});
  }
  return out;
}

SuiteResult semidirect_suite(const SuiteConfig& cfg) {
  SuiteResult out;
  out.suite = "semidirect";
  InstanceGenerator gen(cfg.seed);
  const Ring t2 = torus(2);
  const SparseShape shape = loop_shape(cfg.mode_radius);
  const PairMap R = BlockOperator::loop_splitting(2).as_map();
  const auto res = PairingGrade::Residue;

  IdentityReport sd = named("sd_bracket Jacobi");
  IdentityReport rb = named("R_bracket Jacobi (loop splitting)");
  IdentityReport inv = named("pairing invariance");
  IdentityReport lp = named("lie_poisson antisymmetry");
  IdentityReport dlp = named("deformed_lie_poisson antisymmetry (loop splitting)");
  for (int t = 0; t < cfg.instances; ++t) {
    const APair u = gen.apair(t2, shape), v = gen.apair(t2, shape), w = gen.apair(t2, shape);
    const APair j = cyclic_sum(sd_bracket, u, v, w);
    sd.record(j.is_zero(), pair_text(j));
    auto br = [&R](const APair& a, const APair& b) { return R_bracket(a, b, R); };
    const APair jr = cyclic_sum(br, u, v, w);
    rb.record(jr.is_zero(), pair_text(jr));
    const FPoly gap = sd_pairing_series(sd_bracket(u, v), w) - sd_pairing_series(u, sd_bracket(v, w));
    inv.record(gap.is_zero(), to_string(gap));

    const EPair x = gen.epair(t2, shape), y = gen.epair(t2, shape);
    for (auto g : {PairingGrade::Constant, res}) {
      const CRat a = lie_poisson(x, y, u, g) + lie_poisson(y, x, u, g);
      lp.record(a.is_zero(), to_string(a));
    }
    const CRat d = deformed_lie_poisson(x, y, u, R, res) + deformed_lie_poisson(y, x, u, R, res);
    dlp.record(d.is_zero(), to_string(d));
  }
  out.identities = {sd, rb, inv, lp, dlp};
  return out;
}

SuiteResult algebroid_suite(const SuiteConfig& cfg, const std::vector<AlgebroidCase>& cases) {
  SuiteResult out;
  out.suite = "algebroid";
  InstanceGenerator gen(cfg.seed);
  const SparseShape shape = small(cfg.mode_radius);
  for (const auto& c : cases) {
    const FPAlgebroid& e = c.algebroid;
    IdentityReport sq = named("d_E^2 = 0 [" + e.name() + "]");
    for (int t = 0; t < cfg.instances; ++t) {
      const int k = e.rank() >= 2 ? t % (e.rank() - 1) : 0;
      const KForm w = gen.kform(e.ring(), e.rank(), k, shape);
      const KForm r = e.rank() >= 2 ? d_E(d_E(w, e), e) : e.zero_form(0);
      sq.record(r.is_zero(), to_string(r));
    }
    out.identities.push_back(sq);
    if (!c.q) continue;
    const DStar ds = build_dstar(*c.q, e);
    IdentityReport acc = named("d_E* certified [" + e.name() + "]");
    acc.record(ds.accepted, ds.failed_identity + " on " + ds.generator + ": " + to_string(ds.residual));
    IdentityReport flat = named("curvature of Q vanishes [" + e.name() + "]");
    const auto f = curvature(*c.q, e);
    std::string witness;
    for (std::size_t k = 0; k < f.size() && witness.empty(); ++k)
      for (std::size_t l = 0; l < f[k].size() && witness.empty(); ++l)
        if (!f[k][l].is_zero()) witness = "F^" + std::to_string(k + 1) + "_" + std::to_string(l + 1) + " = " + to_string(f[k][l]);
    flat.record(witness.empty(), witness);
    out.identities.insert(out.identities.end(), {acc, flat});
  }
  return out;
}

SuiteResult lenard_suite(const LenardProblem& problem) {
  SuiteResult out;
  out.suite = "lenard";
  const LenardState st = build_hierarchy(problem.algebroid, problem.q, problem.seed, problem.omega, problem.cap);
  for (const auto& e : certify(st).entries) {
    IdentityReport r = named(e.identity);
    r.record(e.zero, e.residual);
    out.identities.push_back(r);
  }
  out.notes["problem"] = problem.name;
  out.notes["chain length"] = std::to_string(st.hams.size());
  out.notes["hamiltonian stop"] = st.ham_stop;
  out.notes["two-form stop"] = st.omega_stop;
  return out;
}

std::vector<NamedAlgebra> default_algebras() {
  const FinLieAlg aff = presets::affine_line(), n4 = presets::filiform4();
  return {{"aff1", aff, presets::affine_line_form(aff)}, {"filiform4", n4, presets::filiform4_form(n4)}};
}

std::vector<AlgebroidCase> default_algebroids() {
  const FPAlgebroid osc = FPAlgebroid::oscillator();
  return {{FPAlgebroid::tangent(torus(1), "tangent-t1"), std::nullopt},
          {FPAlgebroid::so3_zero_anchor(), std::nullopt},
          {osc, QMap::diagonal(osc.ring(), {2, 2, 3, 3})}};
}

}  // namespace cab
