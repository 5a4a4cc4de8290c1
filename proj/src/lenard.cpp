#include "cab/lenard.hpp"

#include "cab/error.hpp"
#include "cab/linalg.hpp"

namespace cab {

namespace {

/// Replaces each generator e^i by the one-form sum_b m(i,b) f^b.
KForm substitute(const KForm& w, const CMatrix& m) {
  const int rank = m.cols();
  KForm out(w.ring(), rank, w.degree());
  std::vector<KForm> images;
  for (int i = 0; i < m.rows(); ++i) {
    KForm s(w.ring(), rank, 1);
    for (int b = 0; b < rank; ++b)
      if (!m(i, b).is_zero()) s.add(IndexMask{1} << b, FPoly::constant(w.ring(), m(i, b)));
    images.push_back(std::move(s));
  }
  for (const auto& [mask, f] : w.components()) {
    KForm prod = KForm::function(f, rank);
    for (int i : mask_indices(mask)) prod = wedge(prod, images[static_cast<std::size_t>(i)]);
    out += prod;
  }
  return out;
}

FPoly determinant(const std::vector<std::vector<FPoly>>& a, Ring ring) {
  const std::size_t n = a.size();
  if (n == 0) return FPoly::constant(ring, 1);
  if (n == 1) return a[0][0];
  FPoly det(ring);
  for (std::size_t c = 0; c < n; ++c) {
    if (a[0][c].is_zero()) continue;
    std::vector<std::vector<FPoly>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<FPoly> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(a[r][k]);
      minor.push_back(std::move(row));
    }
    FPoly t = a[0][c] * determinant(minor, ring);
    det += c % 2 == 0 ? t : -t;
  }
  return det;
}

std::string render(const Section& s) {
  std::string out = "(";
  for (int j = 0; j < s.size(); ++j) out += (j ? ", " : "") + to_string(s[j]);
  return out + ")";
}

}  // namespace

EPreimage d_E_preimage(const KForm& w, const FPAlgebroid& e) {
  EPreimage out;
  const int m = e.rank();
  out.potential = KForm(e.ring(), m, std::max(w.degree() - 1, 0));
  out.obstruction = KForm(e.ring(), m, w.degree());
  out.defect = KForm(e.ring(), m, w.degree());
  if (w.degree() == 0) throw DomainError("a 0-form has no d_E preimage");
  if (m != e.base_dim()) {
    out.reason = "rank differs from base dimension";
    return out;
  }
  if (!e.abelian()) {
    out.reason = "nonzero structure functions";
    return out;
  }
  CMatrix a(m, m);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) {
      const FPoly& entry = e.anchor(i)[k];
      if (!entry.is_constant()) {
        out.reason = "anchor is not constant";
        return out;
      }
      a(i, k) = entry.constant_term();
    }
  auto to_dx = inverse(a.transpose());
  if (!to_dx) {
    out.reason = "anchor is singular";
    return out;
  }
  out.supported = true;
  // dx^a = sum_i a(i,a) e^i, so e^i = sum_a to_dx(i,a) dx^a.
  const Preimage p = de_rham_preimage(substitute(w, *to_dx));
  const CMatrix back = a.transpose();
  out.potential = substitute(p.potential, back);
  out.obstruction = substitute(p.obstruction, back);
  out.defect = substitute(p.defect, back);
  return out;
}

FPoly zero_mean(const FPoly& f) { return f - mean(f); }

std::string to_string(HamStatus s) { return s == HamStatus::Global ? "global" : "local-only"; }

HamiltonianResult hamiltonian_of(const Section& k, const KForm& omega, const FPAlgebroid& e) {
  if (omega.degree() != 2) throw DomainError("Hamiltonian detection needs a 2-form");
  const OddDerivation de = de_differential(e);
  if (!de(omega).is_zero()) throw StructureError("omega is not d_E-closed");
  if (!lie_E(k, omega, e).is_zero()) throw StructureError("omega is not invariant along K");
  const KForm target = -interior(k.span(), omega);
  const EPreimage p = d_E_preimage(target, e);
  if (!p.supported) throw StructureError("d_E preimage unsupported: " + p.reason);
  if (!p.closed()) throw StructureError("i_K omega is not d_E-closed");
  HamiltonianResult r;
  r.h = zero_mean(p.potential.as_function());
  r.obstruction = p.obstruction;
  r.status = p.obstruction.is_zero() ? HamStatus::Global : HamStatus::LocalOnly;
  return r;
}

Section hamiltonian_section(const FPoly& f, const KForm& omega, const FPAlgebroid& e) {
  const int m = e.rank();
  if (omega.degree() != 2) throw DomainError("Hamiltonian section needs a 2-form");
  // Solve W^T K = -d_E f with W_ab = omega(A_a, A_b).
  std::vector<std::vector<FPoly>> wt(static_cast<std::size_t>(m));
  for (int b = 0; b < m; ++b)
    for (int a = 0; a < m; ++a)
      wt[static_cast<std::size_t>(b)].push_back(a == b ? FPoly(e.ring()) : omega.component(std::vector<int>{a, b}));
  const FPoly det = determinant(wt, e.ring());
  if (det.is_zero() || !det.is_constant()) throw KernelError("two-form is degenerate or has nonconstant determinant");
  const CRat inv = CRat(1) / det.constant_term();
  const KForm rhs = -de_differential(e)(KForm::function(f, m));

  Section k = Section::zero(e.ring(), m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      // adj(W^T)_{ij} = (-1)^{i+j} det(minor with row j, column i removed).
      std::vector<std::vector<FPoly>> minor;
      for (int r = 0; r < m; ++r) {
        if (r == j) continue;
        std::vector<FPoly> row;
        for (int c = 0; c < m; ++c)
          if (c != i) row.push_back(wt[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
        minor.push_back(std::move(row));
      }
      const FPoly rj = rhs.component(IndexMask{1} << j);
      if (rj.is_zero()) continue;
      FPoly t = determinant(minor, e.ring()) * rj;
      k[i] += (i + j) % 2 == 0 ? t : -t;
    }
    k[i] *= inv;
  }
  return k;
}

LenardStep lenard_step(const FPoly& h, const DStar& dstar, const FPAlgebroid& e) {
  const KForm beta = dstar.op(KForm::function(h, e.rank()));
  if (!de_differential(e)(beta).is_zero()) throw StructureError("d_E* H is not d_E-closed");
  LenardStep s;
  if (beta.is_zero()) {
    s.next = FPoly(e.ring());
    s.remainder = KForm(e.ring(), e.rank(), 1);
    return s;
  }
  const EPreimage p = d_E_preimage(beta, e);
  if (!p.supported) throw StructureError("d_E preimage unsupported: " + p.reason);
  s.next = zero_mean(p.potential.as_function());
  s.remainder = p.obstruction;
  s.status = p.obstruction.is_zero() ? StepStatus::Ok : StepStatus::Remainder;
  return s;
}

LenardState build_hierarchy(const FPAlgebroid& e, const QMap& q, const Section& seed, const KForm& omega1, int cap) {
  if (cap < 1) throw DomainError("hierarchy cap must be positive");
  DStar ds = build_dstar(q, e);
  if (!ds.accepted)
    throw StructureError("Q rejected: " + ds.failed_identity + " fails on " + ds.generator + ", residual " +
                         to_string(ds.residual));
  const OddDerivation de = de_differential(e);
  if (!de(omega1).is_zero() || !ds.op(omega1).is_zero())
    throw StructureError("seed two-form is not closed under both differentials");
  const HamiltonianResult h1 = hamiltonian_of(seed, omega1, e);
  if (h1.status != HamStatus::Global)
    throw StructureError("seed flow is only locally Hamiltonian, obstruction " + to_string(h1.obstruction));

  LenardState st{e, q, std::move(ds), seed, {omega1}, {}, {h1.h}, {}, "cap", "cap"};

  while (static_cast<int>(st.hams.size()) < cap) {
    if (st.dstar.op(KForm::function(st.hams.back(), e.rank())).is_zero()) {
      st.ham_stop = "d_E* H vanishes";
      break;
    }
    LenardStep step = lenard_step(st.hams.back(), st.dstar, e);
    if (step.status == StepStatus::Remainder) {
      st.ham_stop = "d_E*-closed remainder";
      break;
    }
    st.hams.push_back(std::move(step.next));
  }

  while (static_cast<int>(st.omegas.size()) < cap) {
    const EPreimage p = d_E_preimage(st.omegas.back(), e);
    if (!p.exact()) {
      st.omega_stop = p.supported ? "no potential" : "preimage unsupported: " + p.reason;
      break;
    }
    st.betas.push_back(p.potential);
    KForm next = de(q.transpose_apply(p.potential));
    if (next.is_zero()) {
      st.omega_stop = "d_E Q* beta vanishes";
      break;
    }
    if (!de(next).is_zero() || !st.dstar.op(next).is_zero()) {
      st.omega_stop = "new two-form not closed";
      break;
    }
    st.omegas.push_back(std::move(next));
  }

  for (const auto& w : st.omegas) {
    try {
      st.flows.push_back(hamiltonian_section(st.hams.front(), w, e));
    } catch (const KernelError&) {
      break;
    }
  }
  return st;
}

FPoly poisson_s(const FPoly& f, const FPoly& g, int s, const LenardState& st) {
  if (s < 0 || s >= static_cast<int>(st.omegas.size())) throw DomainError("two-form index out of range");
  const KForm& w = st.omegas[static_cast<std::size_t>(s)];
  const Section kf = hamiltonian_section(f, w, st.algebroid);
  const Section kg = hamiltonian_section(g, w, st.algebroid);
  return interior(kg.span(), interior(kf.span(), w)).as_function();
}

bool LenardCertificate::certified() const {
  for (const auto& e : entries)
    if (!e.zero) return false;
  return true;
}

std::string LenardCertificate::first_failure() const {
  for (const auto& e : entries)
    if (!e.zero) return e.identity;
  return "";
}

LenardCertificate certify(const LenardState& st) {
  LenardCertificate cert;
  const FPAlgebroid& e = st.algebroid;
  const OddDerivation de = de_differential(e);
  auto add = [&](std::string id, std::string residual, bool zero) {
    cert.entries.push_back({std::move(id), zero, zero ? "0" : std::move(residual)});
  };
  const auto nw = st.omegas.size(), nh = st.hams.size(), nk = st.flows.size();
  for (std::size_t j = 0; j < nw; ++j) {
    const KForm a = de(st.omegas[j]);
    add("d_E w_" + std::to_string(j + 1), to_string(a), a.is_zero());
    const KForm b = st.dstar.op(st.omegas[j]);
    add("d_E* w_" + std::to_string(j + 1), to_string(b), b.is_zero());
  }
  for (std::size_t j = 0; j < std::min(nw, nh); ++j) {
    const KForm r = interior(st.seed.span(), st.omegas[j]) + de(KForm::function(st.hams[j], e.rank()));
    add("i_K w_" + std::to_string(j + 1) + " + d_E H_" + std::to_string(j + 1), to_string(r), r.is_zero());
  }
  for (std::size_t s = 0; s < nk; ++s)
    for (std::size_t i = 0; i < nh; ++i)
      for (std::size_t j = i + 1; j < nh; ++j) {
        const FPoly r = poisson_s(st.hams[i], st.hams[j], static_cast<int>(s), st);
        add("{H_" + std::to_string(i + 1) + ",H_" + std::to_string(j + 1) + "}_" + std::to_string(s + 1),
            to_string(r), r.is_zero());
      }
  for (std::size_t i = 0; i < nk; ++i)
    for (std::size_t j = i + 1; j < nk; ++j) {
      const Section r = e.bracket(st.flows[i], st.flows[j]);
      add("[K_" + std::to_string(i + 1) + ",K_" + std::to_string(j + 1) + "]", render(r), r.is_zero());
    }
  return cert;
}

namespace presets {

namespace {

LenardProblem oscillator_with(std::string name, const QMap& q, int cap) {
  FPAlgebroid e = FPAlgebroid::oscillator();
  const Ring r = e.ring();
  auto x = [&](int j) { return FPoly::coordinate(r, j); };
  Section k(std::vector<FPoly>{-x(1), x(0), -x(3), x(2)});
  KForm w = KForm::basis(r, 4, {0, 1}) + KForm::basis(r, 4, {2, 3});
  return {std::move(name), std::move(e), q, std::move(k), std::move(w), cap};
}

}  // namespace

LenardProblem oscillator(const Rational& l1, const Rational& l2, int cap) {
  return oscillator_with("oscillator", QMap::diagonal(chart(4), {l1, l1, l2, l2}), cap);
}

LenardProblem oscillator_zero_q() { return oscillator_with("oscillator-zero-q", QMap::zero(chart(4), 4), 4); }

LenardProblem oscillator_split_pairs() {
  return oscillator_with("oscillator-split-pairs", QMap::diagonal(chart(4), {2, 3, 5, 7}), 4);
}

LenardProblem oscillator_incompatible_q() {
  const Ring r = chart(4);
  std::vector<std::vector<std::vector<FPoly>>> b(4, std::vector<std::vector<FPoly>>(4, std::vector<FPoly>(4, FPoly(r))));
  b[0][0][1] = FPoly::constant(r, 1);
  return oscillator_with("oscillator-incompatible-q", QMap(b), 4);
}

LenardProblem torus_translation() {
  FPAlgebroid e = FPAlgebroid::tangent(torus(2));
  const Ring r = e.ring();
  Section k(std::vector<FPoly>{FPoly::constant(r, 1), FPoly(r)});
  return {"torus-translation", std::move(e), QMap::zero(r, 2), std::move(k), KForm::basis(r, 2, {0, 1}), 1};
}

}  // namespace presets

}  // namespace cab
