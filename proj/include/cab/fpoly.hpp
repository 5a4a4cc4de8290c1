#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "cab/crat.hpp"

namespace cab {

/// How the exponent vector of a term is read.
///   Fourier:    e^{i k.x} on the torus T^n (any integer k)
///   Polynomial: x^k on a chart of R^n (k >= 0)
/// Both flavors carry a passive Laurent exponent of the loop parameter lambda.
enum class Flavor { Fourier, Polynomial };

inline constexpr int kMaxDim = 6;

struct Ring {
  int dim = 1;
  Flavor flavor = Flavor::Fourier;

  friend bool operator==(const Ring&, const Ring&) = default;
};

inline Ring torus(int n) { return {n, Flavor::Fourier}; }
inline Ring chart(int n) { return {n, Flavor::Polynomial}; }

/// Torus wave numbers (or monomial exponents) plus the power of lambda.
/// Entries of `torus` past the ring dimension are always zero.
struct MultiIndex {
  std::array<int, kMaxDim> torus{};
  int loop = 0;

  bool torus_zero() const;
  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
};

/// Sparse trigonometric/polynomial Laurent series over CRat. Canonical form:
/// no stored coefficient is zero, so equality is term-map equality.
class FPoly {
 public:
  using Terms = std::map<MultiIndex, CRat>;

  FPoly() = default;
  explicit FPoly(Ring ring);

  static FPoly constant(Ring ring, const CRat& c);
  static FPoly term(Ring ring, const std::vector<int>& modes, int loop, const CRat& c);
  /// Polynomial coordinate x_j, or e^{i x_j} for the Fourier flavor.
  static FPoly coordinate(Ring ring, int axis);
  /// lambda^k.
  static FPoly lambda(Ring ring, int k);

  const Ring& ring() const { return ring_; }
  int dim() const { return ring_.dim; }
  Flavor flavor() const { return ring_.flavor; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  /// Only the lambda^0 x^0 term is present (or the polynomial is zero).
  bool is_constant() const;
  /// Every term has zero torus index (lambda dependence allowed).
  bool is_x_independent() const;
  CRat coeff(const MultiIndex& idx) const;
  /// Value of the constant term.
  CRat constant_term() const { return coeff(MultiIndex{}); }

  /// Adds c at idx, keeping canonical form.
  void add(const MultiIndex& idx, const CRat& c);

  FPoly& operator+=(const FPoly& o);
  FPoly& operator-=(const FPoly& o);
  FPoly& operator*=(const CRat& c);
  FPoly operator-() const;

  friend FPoly operator+(FPoly a, const FPoly& b) { return a += b; }
  friend FPoly operator-(FPoly a, const FPoly& b) { return a -= b; }
  friend FPoly operator*(const FPoly& a, const FPoly& b);
  friend FPoly operator*(FPoly a, const CRat& c) { return a *= c; }
  friend FPoly operator*(const CRat& c, FPoly a) { return a *= c; }

  friend bool operator==(const FPoly& a, const FPoly& b) {
    return a.ring_ == b.ring_ && a.terms_ == b.terms_;
  }

 private:
  void check_index(const MultiIndex& idx) const;

  Ring ring_{};
  Terms terms_;
};

void require_same_ring(const FPoly& a, const FPoly& b);

/// d/dx_j, 0-based axis.
FPoly partial(const FPoly& f, int axis);
/// Normalized torus average: keeps the terms with zero torus index, so
/// mean(1) = 1. For the polynomial flavor this is the constant-in-x part.
FPoly mean(const FPoly& f);
/// Coefficient slice at lambda^-1, returned at lambda^0.
FPoly residue(const FPoly& f);
/// Coefficient slice at lambda^m, returned at lambda^0.
FPoly loop_slice(const FPoly& f, int m);
/// Multiply by lambda^k.
FPoly shift_loop(const FPoly& f, int k);
/// Complex conjugate of the function: conjugated coefficients and, for the
/// Fourier flavor, negated wave numbers.
FPoly conjugate(const FPoly& f);
/// Sum of |c|^2 over the stored terms.
Rational norm2(const FPoly& f);
/// Terms whose loop exponent lies in [lo, hi] and whose torus modes obey
/// |k_j| <= radius.
FPoly restrict_window(const FPoly& f, int radius, int lo, int hi);

std::string to_string(const FPoly& f);
std::ostream& operator<<(std::ostream& os, const FPoly& f);

}  // namespace cab
