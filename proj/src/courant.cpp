#include "cab/courant.hpp"

#include <map>

#include "cab/error.hpp"

namespace cab {

EPair courant_bracket(const EPair& u, const EPair& v) {
  require_same_shape(u.form.size(), v.form.size(), "Courant pair dimension");
  const auto& [alpha, a] = u;
  const auto& [beta, b] = v;
  OneForm form = lie_derivative(a, beta) - lie_derivative(b, alpha);
  form += CRat(Rational(1, 2)) * gradient(contract(alpha, b) - contract(beta, a));
  return {std::move(form), vf_bracket(a, b)};
}

std::string to_string(JacobiClass c) {
  switch (c) {
    case JacobiClass::Zero: return "zero";
    case JacobiClass::ExactForm: return "exact-form";
    case JacobiClass::Other: return "other";
  }
  return "other";
}

JacobiatorReport jacobiator(const EPair& u, const EPair& v, const EPair& w) {
  EPair j = courant_bracket(u, courant_bracket(v, w)) + courant_bracket(v, courant_bracket(w, u)) +
            courant_bracket(w, courant_bracket(u, v));
  JacobiatorReport r;
  r.form_preimage = de_rham_preimage(KForm::from_one_form(j.form));
  if (j.is_zero())
    r.cls = JacobiClass::Zero;
  else if (j.field.is_zero() && r.form_preimage.exact())
    r.cls = JacobiClass::ExactForm;
  else
    r.cls = JacobiClass::Other;
  r.value = std::move(j);
  return r;
}

PoissonBivector::PoissonBivector(std::vector<std::vector<FPoly>> comps) : comps_(std::move(comps)) {
  const int n = dim();
  if (n == 0) throw DimensionMismatch("empty bivector");
  for (const auto& row : comps_) require_same_shape(static_cast<int>(row.size()), n, "bivector row");
  require_same_shape(ring().dim, n, "bivector size vs ring dimension");
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      require_same_ring((*this)(0, 0), (*this)(j, k));
      if (!((*this)(j, k) + (*this)(k, j)).is_zero())
        throw StructureError("bivector not antisymmetric at (" + std::to_string(j + 1) + "," +
                             std::to_string(k + 1) + ")");
    }
}

PoissonBivector PoissonBivector::constant(Ring ring, const RatMatrix& p) {
  std::vector<std::vector<FPoly>> c(static_cast<std::size_t>(p.rows()));
  for (int j = 0; j < p.rows(); ++j)
    for (int k = 0; k < p.cols(); ++k) c[static_cast<std::size_t>(j)].push_back(FPoly::constant(ring, p(j, k)));
  return PoissonBivector(std::move(c));
}

VecField PoissonBivector::sharp(const OneForm& alpha) const {
  require_same_shape(alpha.size(), dim(), "bivector dimension");
  VecField r = VecField::zero(ring(), dim());
  for (int j = 0; j < dim(); ++j) {
    if (alpha[j].is_zero()) continue;
    for (int k = 0; k < dim(); ++k)
      if (!(*this)(j, k).is_zero()) r[k] += (*this)(j, k) * alpha[j];
  }
  return r;
}

FPoly PoissonBivector::bracket(const FPoly& f, const FPoly& g) const {
  FPoly r(ring());
  std::vector<FPoly> dg;
  for (int k = 0; k < dim(); ++k) dg.push_back(partial(g, k));
  for (int j = 0; j < dim(); ++j) {
    FPoly df = partial(f, j);
    if (df.is_zero()) continue;
    for (int k = 0; k < dim(); ++k)
      if (!(*this)(j, k).is_zero() && !dg[static_cast<std::size_t>(k)].is_zero())
        r += (*this)(j, k) * df * dg[static_cast<std::size_t>(k)];
  }
  return r;
}

namespace {

std::vector<MultiIndex> generators(Ring ring, int radius) {
  const int lo = ring.flavor == Flavor::Fourier ? -radius : 0;
  std::vector<MultiIndex> out;
  MultiIndex idx;
  for (int j = 0; j < ring.dim; ++j) idx.torus[j] = lo;
  while (true) {
    if (!idx.torus_zero()) out.push_back(idx);
    int j = 0;
    while (j < ring.dim && idx.torus[j] == radius) idx.torus[j++] = lo;
    if (j == ring.dim) break;
    ++idx.torus[j];
  }
  return out;
}

}  // namespace

PoissonCheck poisson_check(const PoissonBivector& p, int radius) {
  if (radius < 1) throw DomainError("poisson_check radius must be positive");
  PoissonCheck out;
  out.radius = radius;
  out.residual = FPoly(p.ring());
  const std::vector<MultiIndex> gens = generators(p.ring(), radius);
  const std::size_t n = gens.size();
  std::vector<FPoly> f;
  for (const auto& g : gens) {
    FPoly t(p.ring());
    t.add(g, 1);
    f.push_back(std::move(t));
  }
  std::map<std::pair<std::size_t, std::size_t>, FPoly> pair_cache;
  auto pb = [&](std::size_t a, std::size_t b) -> const FPoly& {
    auto it = pair_cache.find({a, b});
    if (it == pair_cache.end()) it = pair_cache.emplace(std::pair{a, b}, p.bracket(f[a], f[b])).first;
    return it->second;
  };
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c) {
        ++out.triples;
        FPoly j = p.bracket(f[a], pb(b, c)) + p.bracket(f[b], pb(c, a)) + p.bracket(f[c], pb(a, b));
        if (!j.is_zero()) {
          out.ok = false;
          out.witness = std::array<MultiIndex, 3>{gens[a], gens[b], gens[c]};
          out.residual = std::move(j);
          return out;
        }
      }
  return out;
}

CertifiedPoisson CertifiedPoisson::certify(PoissonBivector p, int radius) {
  PoissonCheck chk = poisson_check(p, radius);
  if (!chk.ok) {
    std::string msg = "bivector fails Jacobi on generators";
    for (const auto& g : *chk.witness) {
      msg += " (";
      for (int j = 0; j < p.dim(); ++j) msg += (j ? "," : "") + std::to_string(g.torus[j]);
      msg += ")";
    }
    throw StructureError(msg);
  }
  return CertifiedPoisson(std::move(p));
}

namespace {

OneForm koszul(const OneForm& alpha, const OneForm& beta, const PoissonBivector& p) {
  require_same_shape(alpha.size(), p.dim(), "one-form dimension");
  require_same_shape(beta.size(), p.dim(), "one-form dimension");
  const VecField pa = p.sharp(alpha);
  const VecField pb = p.sharp(beta);
  KForm r = interior(pa, ext_d(KForm::from_one_form(beta))) - interior(pb, ext_d(KForm::from_one_form(alpha)));
  OneForm out = r.as_one_form();
  out -= CRat(Rational(1, 2)) * gradient(contract(alpha, pb) - contract(beta, pa));
  return out;
}

}  // namespace

OneForm reduced_bracket(const OneForm& alpha, const OneForm& beta, const CertifiedPoisson& cp) {
  return koszul(alpha, beta, cp.bivector());
}

VecField anchor_check(const OneForm& alpha, const OneForm& beta, const PoissonBivector& p) {
  return p.sharp(koszul(alpha, beta, p)) - vf_bracket(p.sharp(alpha), p.sharp(beta));
}

FinLieAlg::FinLieAlg(int dim) : dim_(dim), c_(static_cast<std::size_t>(dim * dim * dim)) {
  if (dim < 1) throw DomainError("Lie algebra dimension must be positive");
}

FinLieAlg FinLieAlg::abelian(int dim) { return FinLieAlg(dim); }

FinLieAlg FinLieAlg::from_brackets(int dim, const std::vector<Bracket>& brackets) {
  FinLieAlg g(dim);
  std::vector<bool> set(g.c_.size(), false);
  for (const auto& [i, j, k, v] : brackets) {
    if (i < 0 || j < 0 || k < 0 || i >= dim || j >= dim || k >= dim)
      throw DomainError("structure constant index out of range");
    const std::string where = "[e" + std::to_string(i + 1) + ",e" + std::to_string(j + 1) + "] at e" +
                              std::to_string(k + 1);
    if (i == j) {
      if (sgn(v) != 0) throw StructureError("nonzero self-bracket " + where);
      continue;
    }
    const std::size_t a = g.idx(k, i, j), b = g.idx(k, j, i);
    if ((set[a] && g.c_[a] != v) || (set[b] && g.c_[b] != -v))
      throw StructureError("antisymmetry violated " + where);
    g.c_[a] = v;
    g.c_[b] = -v;
    set[a] = set[b] = true;
  }
  g.check_jacobi();
  return g;
}

void FinLieAlg::check_jacobi() const {
  const int m = dim_;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      for (int c = b + 1; c < m; ++c)
        for (int t = 0; t < m; ++t) {
          // sum_s c^s_{bc} c^t_{as} + c^s_{ca} c^t_{bs} + c^s_{ab} c^t_{cs}
          Rational sum = 0;
          for (int s = 0; s < m; ++s)
            sum += this->c(s, b, c) * this->c(t, a, s) + this->c(s, c, a) * this->c(t, b, s) +
                   this->c(s, a, b) * this->c(t, c, s);
          if (sgn(sum) != 0)
            throw StructureError("Jacobi fails on (e" + std::to_string(a + 1) + ",e" + std::to_string(b + 1) +
                                 ",e" + std::to_string(c + 1) + ") at e" + std::to_string(t + 1));
        }
}

LieVector FinLieAlg::bracket(const LieVector& x, const LieVector& y) const {
  require_same_shape(static_cast<int>(x.size()), dim_, "Lie vector");
  require_same_shape(static_cast<int>(y.size()), dim_, "Lie vector");
  LieVector r(static_cast<std::size_t>(dim_));
  for (int i = 0; i < dim_; ++i) {
    if (sgn(x[static_cast<std::size_t>(i)]) == 0) continue;
    for (int j = 0; j < dim_; ++j) {
      if (sgn(y[static_cast<std::size_t>(j)]) == 0) continue;
      const Rational xy = x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)];
      for (int k = 0; k < dim_; ++k) r[static_cast<std::size_t>(k)] += xy * c(k, i, j);
    }
  }
  return r;
}

LinForm FinLieAlg::coad(const LieVector& x, const LinForm& mu) const {
  require_same_shape(static_cast<int>(x.size()), dim_, "Lie vector");
  require_same_shape(static_cast<int>(mu.size()), dim_, "linear form");
  LinForm r(static_cast<std::size_t>(dim_));
  for (int i = 0; i < dim_; ++i) {
    if (sgn(x[static_cast<std::size_t>(i)]) == 0) continue;
    for (int j = 0; j < dim_; ++j) {
      if (sgn(mu[static_cast<std::size_t>(j)]) == 0) continue;
      const Rational xm = x[static_cast<std::size_t>(i)] * mu[static_cast<std::size_t>(j)];
      for (int k = 0; k < dim_; ++k) r[static_cast<std::size_t>(k)] += xm * c(j, i, k);
    }
  }
  return r;
}

SymplForm::SymplForm(const FinLieAlg& g, RatMatrix omega) : omega_(std::move(omega)) {
  const int m = g.dim();
  if (omega_.rows() != m || omega_.cols() != m) throw DimensionMismatch("symplectic matrix shape");
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (omega_(i, j) != -omega_(j, i))
        throw StructureError("symplectic form not antisymmetric at (" + std::to_string(i + 1) + "," +
                             std::to_string(j + 1) + ")");
  // Omega([x,y],z) + cyclic on basis triples.
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      for (int c = b + 1; c < m; ++c) {
        Rational sum = 0;
        for (int s = 0; s < m; ++s)
          sum += g.c(s, a, b) * omega_(s, c) + g.c(s, b, c) * omega_(s, a) + g.c(s, c, a) * omega_(s, b);
        if (sgn(sum) != 0)
          throw StructureError("cocycle identity fails on (e" + std::to_string(a + 1) + ",e" +
                               std::to_string(b + 1) + ",e" + std::to_string(c + 1) + ")");
      }
  // lower(x) = omega^T x, so raise uses (omega^T)^{-1}.
  auto inv = inverse(omega_.transpose());
  if (!inv) throw DomainError("symplectic form is singular");
  anchor_ = std::move(*inv);
}

LinForm SymplForm::lower(const LieVector& x) const { return omega_.transpose() * x; }

LieVector SymplForm::raise(const LinForm& mu) const { return anchor_ * mu; }

namespace {

LinForm sub(LinForm a, const LinForm& b) {
  for (std::size_t k = 0; k < a.size(); ++k) a[k] -= b[k];
  return a;
}

LinForm add(LinForm a, const LinForm& b) {
  for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
  return a;
}

LinForm anchored(const LinForm& a, const LinForm& b, const FinLieAlg& g, const RatMatrix& anchor) {
  return sub(g.coad(anchor * b, a), g.coad(anchor * a, b));
}

}  // namespace

LinForm sympl_bracket(const LinForm& alpha, const LinForm& beta, const FinLieAlg& g, const SymplForm& omega) {
  return anchored(alpha, beta, g, omega.anchor());
}

LinForm sympl_bracket_contracted(const LinForm& alpha, const LinForm& beta, const FinLieAlg& g,
                                 const SymplForm& omega) {
  return omega.lower(g.bracket(omega.raise(alpha), omega.raise(beta)));
}

LinForm anchored_jacobi_residual(const LinForm& a, const LinForm& b, const LinForm& c, const FinLieAlg& g,
                                 const RatMatrix& anchor) {
  auto br = [&](const LinForm& x, const LinForm& y) { return anchored(x, y, g, anchor); };
  return add(add(br(a, br(b, c)), br(b, br(c, a))), br(c, br(a, b)));
}

bool CohoBasis::contains(const LinForm& mu) const {
  for (int r = 0; r < derived_rows.rows(); ++r) {
    Rational s = 0;
    for (int k = 0; k < derived_rows.cols(); ++k) s += derived_rows(r, k) * mu[static_cast<std::size_t>(k)];
    if (sgn(s) != 0) return false;
  }
  return true;
}

CohoBasis h1_reduce(const FinLieAlg& g) {
  const int m = g.dim();
  const int pairs = m * (m - 1) / 2;
  RatMatrix rows(std::max(pairs, 1), m);
  int r = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j, ++r)
      for (int k = 0; k < m; ++k) rows(r, k) = g.c(k, i, j);
  return {nullspace(rows), rows};
}

LinForm h1_bracket(const LinForm& a, const LinForm& b, const FinLieAlg& g, const RatMatrix& anchor,
                   const CohoBasis& h1) {
  if (!h1.contains(a) || !h1.contains(b)) throw StructureError("representative does not annihilate [g,g]");
  LinForm r = anchored(a, b, g, anchor);
  if (!h1.contains(r)) throw StructureError("bracket leaves the annihilator of [g,g]");
  return r;
}

namespace presets {

FinLieAlg affine_line() { return FinLieAlg::from_brackets(2, {{0, 1, 1, 1}}); }

SymplForm affine_line_form(const FinLieAlg& g) {
  RatMatrix w(2, 2);
  w(0, 1) = 1;
  w(1, 0) = -1;
  return SymplForm(g, w);
}

FinLieAlg filiform4() { return FinLieAlg::from_brackets(4, {{0, 1, 2, 1}, {0, 2, 3, 1}}); }

SymplForm filiform4_form(const FinLieAlg& g) {
  RatMatrix w(4, 4);
  w(0, 3) = 1;
  w(3, 0) = -1;
  w(1, 2) = 1;
  w(2, 1) = -1;
  return SymplForm(g, w);
}

FinLieAlg heisenberg() { return FinLieAlg::from_brackets(3, {{0, 1, 2, 1}}); }

}  // namespace presets

}  // namespace cab
