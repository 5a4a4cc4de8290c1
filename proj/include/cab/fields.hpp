#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "cab/fpoly.hpp"

namespace cab {

/// Component vector of FPoly sharing one ring. Base of VecField and OneForm;
/// the two are kept as distinct types so a field cannot be passed where a
/// form is expected.
template <class Derived>
class ComponentVector {
 public:
  ComponentVector() = default;
  explicit ComponentVector(std::vector<FPoly> comps) : comps_(std::move(comps)) {
    for (const auto& c : comps_) require_same_ring(comps_.front(), c);
  }
  static Derived zero(Ring ring, int count) {
    return Derived(std::vector<FPoly>(static_cast<std::size_t>(count), FPoly(ring)));
  }
  /// n components over torus/chart of dimension n.
  static Derived zero(Ring ring) { return zero(ring, ring.dim); }

  int size() const { return static_cast<int>(comps_.size()); }
  Ring ring() const { return comps_.front().ring(); }
  const FPoly& operator[](int j) const { return comps_[static_cast<std::size_t>(j)]; }
  FPoly& operator[](int j) { return comps_[static_cast<std::size_t>(j)]; }
  const std::vector<FPoly>& comps() const { return comps_; }
  std::span<const FPoly> span() const { return comps_; }

  bool is_zero() const {
    for (const auto& c : comps_)
      if (!c.is_zero()) return false;
    return true;
  }

  Derived& operator+=(const Derived& o) {
    check(o);
    for (int j = 0; j < size(); ++j) (*this)[j] += o[j];
    return self();
  }
  Derived& operator-=(const Derived& o) {
    check(o);
    for (int j = 0; j < size(); ++j) (*this)[j] -= o[j];
    return self();
  }
  Derived& operator*=(const CRat& c) {
    for (auto& x : comps_) x *= c;
    return self();
  }
  friend Derived operator+(Derived a, const Derived& b) { return a += b; }
  friend Derived operator-(Derived a, const Derived& b) { return a -= b; }
  friend Derived operator*(Derived a, const CRat& c) { return a *= c; }
  friend Derived operator*(const CRat& c, Derived a) { return a *= c; }
  friend Derived operator*(const FPoly& f, const Derived& a) {
    Derived r = a;
    for (auto& x : r.comps_) x = f * x;
    return r;
  }
  Derived operator-() const {
    Derived r = self();
    for (auto& x : r.comps_) x = -x;
    return r;
  }
  friend bool operator==(const Derived& a, const Derived& b) { return a.comps_ == b.comps_; }

 protected:
  void check(const Derived& o) const;

 private:
  Derived& self() { return static_cast<Derived&>(*this); }
  const Derived& self() const { return static_cast<const Derived&>(*this); }
  std::vector<FPoly> comps_;
};

/// a = sum_j a^j d/dx_j.
class VecField : public ComponentVector<VecField> {
 public:
  using ComponentVector::ComponentVector;
};

/// alpha = sum_j alpha_j dx_j.
class OneForm : public ComponentVector<OneForm> {
 public:
  using ComponentVector::ComponentVector;
};

void require_same_shape(int a, int b, const char* what);

template <class Derived>
void ComponentVector<Derived>::check(const Derived& o) const {
  require_same_shape(size(), o.size(), "component count");
  if (size() > 0) require_same_ring(comps_.front(), o.comps_.front());
}

/// Increasing index tuples are stored as bit masks over the generators.
using IndexMask = std::uint32_t;

std::vector<int> mask_indices(IndexMask mask);
IndexMask indices_mask(std::span<const int> sorted_indices);

/// Exterior k-form with FPoly coefficients over `rank` generators (dx_j on
/// the torus, or an algebroid coframe). Coefficients live in `ring`.
class KForm {
 public:
  using Components = std::map<IndexMask, FPoly>;

  KForm() = default;
  KForm(Ring ring, int rank, int degree);

  static KForm function(const FPoly& f, int rank);
  static KForm from_one_form(const OneForm& alpha);
  /// Generator e^{i1} ^ ... ^ e^{ik}; indices may be given in any order.
  static KForm basis(Ring ring, int rank, std::vector<int> indices);

  Ring ring() const { return ring_; }
  int rank() const { return rank_; }
  int degree() const { return degree_; }
  const Components& components() const { return comps_; }
  bool is_zero() const { return comps_.empty(); }
  FPoly component(IndexMask mask) const;
  /// Component on an index tuple in any order, with the permutation sign.
  FPoly component(std::vector<int> indices) const;
  FPoly as_function() const;
  OneForm as_one_form() const;

  void add(IndexMask mask, const FPoly& coeff);

  KForm& operator+=(const KForm& o);
  KForm& operator-=(const KForm& o);
  KForm operator-() const;
  friend KForm operator+(KForm a, const KForm& b) { return a += b; }
  friend KForm operator-(KForm a, const KForm& b) { return a -= b; }
  friend KForm operator*(const FPoly& f, const KForm& w);
  friend KForm operator*(const CRat& c, const KForm& w);
  friend bool operator==(const KForm& a, const KForm& b) {
    return a.ring_ == b.ring_ && a.rank_ == b.rank_ && a.degree_ == b.degree_ &&
           a.comps_ == b.comps_;
  }

 private:
  void check_compatible(const KForm& o) const;

  Ring ring_{};
  int rank_ = 0;
  int degree_ = 0;
  Components comps_;
};

/// "(f)*e1^e2 + (g)*e3" with 1-based generator labels; "0" when empty.
std::string to_string(const KForm& w);

/// Sign of e^A ^ e^B relative to e^{A|B}; 0 when A and B overlap.
int wedge_sign(IndexMask a, IndexMask b);

KForm wedge(const KForm& a, const KForm& b);
/// Contraction in the first slot: i_v(e^{i1}^...^e^{ik}) = sum_r (-1)^r v^{ir} e^{...^ir...}.
/// Rejects degree-0 input.
KForm interior(std::span<const FPoly> v, const KForm& w);
KForm interior(const VecField& v, const KForm& w);
/// Exterior derivative on the torus/chart (rank must equal the ring dimension).
/// A top-degree form maps to the zero form of degree n+1.
KForm ext_d(const KForm& w);
/// Cartan's formula L_a = i_a d + d i_a.
KForm lie_derivative(const VecField& a, const KForm& w);
/// Component formula (L_a alpha)_j = a^k d_k alpha_j + alpha_k d_j a^k.
OneForm lie_derivative(const VecField& a, const OneForm& alpha);
/// Directional derivative a(f).
FPoly apply(const VecField& a, const FPoly& f);
OneForm gradient(const FPoly& f);
FPoly divergence(const VecField& a);
/// alpha(a) = sum_j alpha_j a^j.
FPoly contract(const OneForm& alpha, const VecField& a);

VecField vf_bracket(const VecField& a, const VecField& b);
/// ad*_a alpha = -(L_a alpha + alpha div a): the adjoint of ad_a under the
/// torus-mean pairing, mean<ad*_a alpha, b> = mean<alpha, [a,b]>.
OneForm coad(const VecField& a, const OneForm& alpha);

/// (alpha, a) in A(M) = T* x T.
struct EPair {
  OneForm form;
  VecField field;

  static EPair zero(Ring ring) { return {OneForm::zero(ring), VecField::zero(ring)}; }
  bool is_zero() const { return form.is_zero() && field.is_zero(); }
  friend bool operator==(const EPair&, const EPair&) = default;
};

/// (a, alpha) in A*(M) = T semidirect T*.
struct APair {
  VecField field;
  OneForm form;

  static APair zero(Ring ring) { return {VecField::zero(ring), OneForm::zero(ring)}; }
  bool is_zero() const { return form.is_zero() && field.is_zero(); }
  friend bool operator==(const APair&, const APair&) = default;
};

EPair operator+(const EPair& u, const EPair& v);
EPair operator-(const EPair& u, const EPair& v);
EPair operator*(const CRat& c, const EPair& u);
APair operator+(const APair& u, const APair& v);
APair operator-(const APair& u, const APair& v);
APair operator*(const CRat& c, const APair& u);
APair operator*(const FPoly& f, const APair& u);

inline APair to_apair(const EPair& u) { return {u.field, u.form}; }
inline EPair to_epair(const APair& u) { return {u.form, u.field}; }

/// Result of solving d(potential) = omega on the torus or a polynomial chart.
struct Preimage {
  KForm potential;
  /// Zero-mode (harmonic) part that no potential can produce; always zero on
  /// a polynomial chart.
  KForm obstruction;
  /// omega - d(potential) - obstruction; nonzero exactly when omega is not closed.
  KForm defect;

  bool closed() const { return defect.is_zero(); }
  bool exact() const { return closed() && obstruction.is_zero(); }
};

/// Fourier flavor: mode-wise division, potential_k = -i i_k omega_k / |k|^2.
/// Polynomial flavor: radial homotopy operator. Degree must be >= 1.
Preimage de_rham_preimage(const KForm& omega);

}  // namespace cab
