#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "cab/fields.hpp"

namespace cab {

/// Section sum_i s^i A_i of an algebroid of rank m.
class Section : public ComponentVector<Section> {
 public:
  using ComponentVector::ComponentVector;
};

/// Finitely presented Lie algebroid: basis A_1..A_m over a chart ring of
/// dimension d, anchor rows rho(A_i) in T(chart), structure functions
/// [A_i, A_j] = sum_k c^k_{ij} A_k. Forms over E are KForm of rank m.
class FPAlgebroid {
 public:
  /// anchor[i] = rho(A_i); structure[k][i][j] = c^k_{ij}. Verifies
  /// antisymmetry, the anchor homomorphism and Jacobi exactly; throws
  /// StructureError naming the first failing index set.
  FPAlgebroid(std::string name, Ring ring, std::vector<VecField> anchor,
              std::vector<std::vector<std::vector<FPoly>>> structure);

  /// T(M) with coordinate frame: anchor identity, zero structure functions.
  static FPAlgebroid tangent(Ring ring, std::string name = "tangent");
  /// Lie algebra with constant structure constants and zero anchor over `ring`.
  static FPAlgebroid zero_anchor(std::string name, Ring ring, int rank,
                                 const std::vector<std::tuple<int, int, int, Rational>>& brackets);
  static FPAlgebroid so3_zero_anchor();
  /// T(R^4), coordinates (x1, y1, x2, y2).
  static FPAlgebroid oscillator();

  const std::string& name() const { return name_; }
  Ring ring() const { return ring_; }
  int rank() const { return static_cast<int>(anchor_.size()); }
  int base_dim() const { return ring_.dim; }
  const VecField& anchor(int i) const { return anchor_[static_cast<std::size_t>(i)]; }
  const FPoly& c(int k, int i, int j) const {
    return c_[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  /// Every structure function is zero.
  bool abelian() const;

  VecField rho(const Section& s) const;
  Section bracket(const Section& x, const Section& y) const;
  KForm zero_form(int degree) const { return KForm(ring_, rank(), degree); }
  /// Coframe element e^k.
  KForm coframe(int k) const { return KForm::basis(ring_, rank(), {k}); }

 private:
  std::string name_;
  Ring ring_;
  std::vector<VecField> anchor_;
  std::vector<std::vector<std::vector<FPoly>>> c_;
};

/// Odd derivation of the exterior algebra over E, fixed by its action on
/// functions, f -> sum_j X_j(f) e^j, and on the coframe, e^k -> on_coframe[k].
class OddDerivation {
 public:
  OddDerivation(std::string name, Ring ring, std::vector<VecField> x, std::vector<KForm> on_coframe);

  const std::string& name() const { return name_; }
  int rank() const { return static_cast<int>(x_.size()); }
  const VecField& x(int j) const { return x_[static_cast<std::size_t>(j)]; }
  const KForm& on_coframe(int k) const { return on_coframe_[static_cast<std::size_t>(k)]; }

  /// Graded Leibniz extension. Degree-m input maps to the zero (m+1)-form.
  KForm apply(const KForm& w) const;
  KForm operator()(const KForm& w) const { return apply(w); }

 private:
  std::string name_;
  Ring ring_;
  std::vector<VecField> x_;
  std::vector<KForm> on_coframe_;
};

/// d_E: X_j = rho(A_j), d_E e^k = -sum_{i<j} c^k_{ij} e^i ^ e^j.
OddDerivation de_differential(const FPAlgebroid& e);
/// d_E w; rejects degree >= m.
KForm d_E(const KForm& w, const FPAlgebroid& e);
/// L_A = i_A d_E + d_E i_A; on functions rho(A) f.
KForm lie_E(const Section& a, const KForm& w, const FPAlgebroid& e);

/// m blocks (Q_j)^k_l of ring elements.
class QMap {
 public:
  explicit QMap(std::vector<std::vector<std::vector<FPoly>>> blocks);
  static QMap zero(Ring ring, int m);
  /// Q_j = scale_j E_jj.
  static QMap diagonal(Ring ring, const std::vector<Rational>& scale);

  int rank() const { return static_cast<int>(q_.size()); }
  const FPoly& q(int j, int k, int l) const {
    return q_[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
  }
  /// Recursion operator N^k_j = sum_l (Q_j)^k_l.
  FPoly recursion(int k, int j) const;
  /// (Q* theta)_j = sum_k N^k_j theta_k on one-forms.
  KForm transpose_apply(const KForm& theta) const;
  /// Connection form Theta^k_l = sum_j (Q_j)^k_l e^j.
  KForm connection(int k, int l) const;

 private:
  std::vector<std::vector<std::vector<FPoly>>> q_;
};

/// Outcome of building and certifying d_E*.
struct DStar {
  OddDerivation op;
  bool accepted = false;
  /// "nilpotency" or "anticommutation" when rejected.
  std::string failed_identity;
  /// Generator on which the failure was exhibited ("x2", "e^{-ix1}", "e^3", ...).
  std::string generator;
  KForm residual;
};

/// d_E* f = sum_j (sum_k N^k_j rho(A_k) f) e^j, d_E* e^k = -sum_l Theta^k_l ^ e^l,
/// extended as an odd derivation. Both d_E*^2 and d_E d_E* + d_E* d_E are even
/// derivations, so checking ring generators and the coframe is complete.
DStar build_dstar(const QMap& q, const FPAlgebroid& e);

/// F^k_l = d_E Theta^k_l + sum_s Theta^k_s ^ Theta^s_l.
std::vector<std::vector<KForm>> curvature(const QMap& q, const FPAlgebroid& e);
bool is_flat(const std::vector<std::vector<KForm>>& f);

/// Ring generators: x_j on a chart, e^{+-ix_j} on a torus.
std::vector<std::pair<std::string, FPoly>> ring_generators(Ring ring);

}  // namespace cab
