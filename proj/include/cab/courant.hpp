#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cab/fields.hpp"
#include "cab/linalg.hpp"

namespace cab {

/// [(alpha,a),(beta,b)] = (L_a beta - L_b alpha + 1/2 d(alpha(b) - beta(a)), [a,b]).
EPair courant_bracket(const EPair& u, const EPair& v);

enum class JacobiClass { Zero, ExactForm, Other };
std::string to_string(JacobiClass c);

struct JacobiatorReport {
  /// [[u,[[v,w]]]] + cyclic.
  EPair value;
  JacobiClass cls = JacobiClass::Zero;
  /// Preimage of the form component; potential is a function.
  Preimage form_preimage;
};

JacobiatorReport jacobiator(const EPair& u, const EPair& v, const EPair& w);

/// Bivector P^{jk} with FPoly entries, antisymmetric by construction check.
class PoissonBivector {
 public:
  /// Throws StructureError if comps is not antisymmetric, DimensionMismatch
  /// if it is not n x n over a ring of dimension n.
  explicit PoissonBivector(std::vector<std::vector<FPoly>> comps);
  static PoissonBivector constant(Ring ring, const RatMatrix& p);

  int dim() const { return static_cast<int>(comps_.size()); }
  Ring ring() const { return comps_.front().front().ring(); }
  const FPoly& operator()(int j, int k) const {
    return comps_[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
  }

  /// (P alpha)^k = sum_j P^{jk} alpha_j.
  VecField sharp(const OneForm& alpha) const;
  /// {f,g} = sum P^{jk} d_j f d_k g.
  FPoly bracket(const FPoly& f, const FPoly& g) const;

 private:
  std::vector<std::vector<FPoly>> comps_;
};

struct PoissonCheck {
  bool ok = true;
  int radius = 2;
  std::size_t triples = 0;
  /// First failing triple of generator exponents and its Jacobi sum.
  std::optional<std::array<MultiIndex, 3>> witness;
  FPoly residual;
};

/// Jacobi identity of {f,g} on all unordered triples of distinct nonconstant
/// generators: e^{ik.x} with |k_j| <= radius on a torus, x^k with
/// 0 <= k_j <= radius on a chart.
PoissonCheck poisson_check(const PoissonBivector& p, int radius = 2);

/// A bivector that has passed poisson_check.
class CertifiedPoisson {
 public:
  /// Throws StructureError naming the failing triple.
  static CertifiedPoisson certify(PoissonBivector p, int radius = 2);
  const PoissonBivector& bivector() const { return p_; }

 private:
  explicit CertifiedPoisson(PoissonBivector p) : p_(std::move(p)) {}
  PoissonBivector p_;
};

/// Koszul bracket on one-forms:
/// i_{P alpha} d beta - i_{P beta} d alpha - 1/2 d(alpha(P beta) - beta(P alpha)).
OneForm reduced_bracket(const OneForm& alpha, const OneForm& beta, const CertifiedPoisson& p);

/// Residual P[[alpha,beta]] - [P alpha, P beta]. Accepts any bivector so that
/// non-Poisson failures are reported rather than raised.
VecField anchor_check(const OneForm& alpha, const OneForm& beta, const PoissonBivector& p);

using LinForm = std::vector<Rational>;
using LieVector = std::vector<Rational>;

/// Finite-dimensional Lie algebra by structure constants: [e_i, e_j] = sum_k c^k_{ij} e_k.
/// Basis indices are 0-based.
class FinLieAlg {
 public:
  struct Bracket {
    int i, j, k;
    Rational value;
  };

  /// Sets c^k_{ij} = value and c^k_{ji} = -value for each entry. Throws
  /// StructureError on conflicting or diagonal entries and on Jacobi failure.
  static FinLieAlg from_brackets(int dim, const std::vector<Bracket>& brackets);
  static FinLieAlg abelian(int dim);

  int dim() const { return dim_; }
  const Rational& c(int k, int i, int j) const { return c_[idx(k, i, j)]; }
  LieVector bracket(const LieVector& x, const LieVector& y) const;
  /// (ad*_x mu)_k = sum_{i,j} x^i mu_j c^j_{ik}, i.e. (ad*_x mu)(z) = mu([x,z]).
  LinForm coad(const LieVector& x, const LinForm& mu) const;

 private:
  explicit FinLieAlg(int dim);
  std::size_t idx(int k, int i, int j) const {
    return static_cast<std::size_t>((k * dim_ + i) * dim_ + j);
  }
  void check_jacobi() const;

  int dim_ = 0;
  std::vector<Rational> c_;
};

/// Invertible antisymmetric 2-cocycle Omega_{ij}; maps x to (Omega x)_k = sum_i x^i Omega_{ik}.
class SymplForm {
 public:
  /// Throws StructureError (antisymmetry, cocycle) or DomainError (singular).
  SymplForm(const FinLieAlg& g, RatMatrix omega);

  const RatMatrix& matrix() const { return omega_; }
  LinForm lower(const LieVector& x) const;
  /// Omega^{-1}: the anchor from g* to g.
  LieVector raise(const LinForm& mu) const;
  /// Matrix of raise: (raise mu)^i = sum_k anchor(i,k) mu_k.
  const RatMatrix& anchor() const { return anchor_; }

 private:
  RatMatrix omega_;
  RatMatrix anchor_;
};

/// ad*_{raise beta} alpha - ad*_{raise alpha} beta.
LinForm sympl_bracket(const LinForm& alpha, const LinForm& beta, const FinLieAlg& g, const SymplForm& omega);
/// Omega([raise alpha, raise beta]): the same bracket through the contraction route.
LinForm sympl_bracket_contracted(const LinForm& alpha, const LinForm& beta, const FinLieAlg& g,
                                 const SymplForm& omega);
/// Cyclic Jacobi sum of an arbitrary anchored bracket ad*_{rho b} a - ad*_{rho a} b.
LinForm anchored_jacobi_residual(const LinForm& a, const LinForm& b, const LinForm& c,
                                 const FinLieAlg& g, const RatMatrix& anchor);

/// First cohomology with trivial coefficients: the annihilator of [g,g].
struct CohoBasis {
  std::vector<LinForm> reps;
  /// Rows span [g,g]^perp test: a form lies in H^1 iff every row pairs to zero.
  RatMatrix derived_rows;

  int dim() const { return static_cast<int>(reps.size()); }
  bool contains(const LinForm& mu) const;
};

CohoBasis h1_reduce(const FinLieAlg& g);
/// ad*_{rho b} a - ad*_{rho a} b for classes a, b. Throws StructureError if a
/// representative is not a class or the result leaves the annihilator.
LinForm h1_bracket(const LinForm& a, const LinForm& b, const FinLieAlg& g, const RatMatrix& anchor,
                   const CohoBasis& h1);

namespace presets {

/// aff(1): [e1,e2] = e2, Omega = e1* ^ e2*.
FinLieAlg affine_line();
SymplForm affine_line_form(const FinLieAlg& g);
/// Filiform n4: [e1,e2] = e3, [e1,e3] = e4, Omega = e1*^e4* + e2*^e3*.
FinLieAlg filiform4();
SymplForm filiform4_form(const FinLieAlg& g);
/// Heisenberg h3: [e1,e2] = e3.
FinLieAlg heisenberg();

}  // namespace presets

}  // namespace cab
