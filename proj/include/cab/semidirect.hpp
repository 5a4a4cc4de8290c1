#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "cab/fields.hpp"
#include "cab/linalg.hpp"
#include "cab/random.hpp"
#include "cab/report.hpp"

namespace cab {

/// ((a,alpha),(b,beta)) -> ([a,b], ad*_b alpha - ad*_a beta).
APair sd_bracket(const APair& u, const APair& v);

/// Which lambda power of the pairing series is read as the scalar.
///   Constant: lambda^0, for ungraded data.
///   Residue:  lambda^-1, for loop data; makes the +/- parts isotropic.
enum class PairingGrade { Constant, Residue };
std::string to_string(PairingGrade g);

/// mean(alpha(b) + beta(a)) with lambda retained.
FPoly sd_pairing_series(const APair& u, const APair& v);
CRat sd_pairing(const APair& u, const APair& v, PairingGrade g = PairingGrade::Constant);
CRat sd_pairing(const APair& u, const EPair& v, PairingGrade g = PairingGrade::Constant);

/// ((l,p) | [X,Y]) for linear functionals with duals X, Y.
CRat lie_poisson(const EPair& x, const EPair& y, const APair& point, PairingGrade g = PairingGrade::Constant);

using PairMap = std::function<APair(const APair&)>;

/// Linear operator on APair acting on each lambda^m slice by a 2n x 2n block
/// (rows/cols: field components, then form components). A mode whose block
/// is absent is outside the domain; applying there raises KernelError.
class BlockOperator {
 public:
  using BlockFn = std::function<std::optional<CMatrix>(int mode)>;

  BlockOperator(int n, BlockFn fn, std::string name);
  /// Same block on every mode.
  static BlockOperator uniform(int n, const CMatrix& block, std::string name);
  static BlockOperator identity(int n);
  static BlockOperator zero(int n);
  /// Block table for listed modes; `below` for unlisted modes < split, `above` otherwise.
  static BlockOperator table(int n, std::map<int, CMatrix> blocks, int split, const CMatrix& below,
                             const CMatrix& above, std::string name);
  /// P+ : keeps lambda^m for m >= 0.
  static BlockOperator loop_plus(int n);
  /// P- = I - P+.
  static BlockOperator loop_minus(int n);
  /// R = P+ - P-.
  static BlockOperator loop_splitting(int n);
  /// Multiplication by the loop mode m.
  static BlockOperator grading(int n);

  int dim() const { return n_; }
  const std::string& name() const { return name_; }
  std::optional<CMatrix> block(int mode) const { return fn_(mode); }

  APair apply(const APair& u) const;
  APair operator()(const APair& u) const { return apply(u); }
  PairMap as_map() const;

  /// Adjoint under the pairing: A^dagger(m) = J A(s(m))^T J with s(m) = -1-m
  /// (residue) or -m (constant), J swapping field and form blocks.
  BlockOperator adjoint(PairingGrade g) const;
  /// Blockwise inverse; singular blocks become absent.
  BlockOperator inverse() const;

  friend BlockOperator operator+(const BlockOperator& a, const BlockOperator& b);
  friend BlockOperator operator-(const BlockOperator& a, const BlockOperator& b);
  /// Composition a after b.
  friend BlockOperator operator*(const BlockOperator& a, const BlockOperator& b);
  friend BlockOperator operator*(const CRat& s, const BlockOperator& a);

 private:
  int n_;
  BlockFn fn_;
  std::string name_;
};

/// r : A(M) -> A*(M) with its symmetric part k and antisymmetric part eta
/// under the pairing. EPair inputs are read through the component swap.
class RTensor {
 public:
  RTensor(BlockOperator r, PairingGrade g);

  const BlockOperator& r() const { return r_; }
  const BlockOperator& k() const { return k_; }
  const BlockOperator& eta() const { return eta_; }
  /// Partial: blocks where eta is singular are absent.
  const BlockOperator& eta_inv() const { return eta_inv_; }
  PairingGrade grade() const { return grade_; }

  APair apply(const EPair& u) const { return r_.apply(to_apair(u)); }

 private:
  BlockOperator r_;
  PairingGrade grade_;
  BlockOperator k_;
  BlockOperator eta_;
  BlockOperator eta_inv_;
};

/// D with optional inverse R = D^-1 (partial; kernel hits raise KernelError).
struct DOperator {
  std::string name;
  PairMap d;
  std::optional<PairMap> r_inv;

  /// D = k eta^{-1}, R = D^{-1}, both blockwise.
  static DOperator from_rtensor(const RTensor& r);
  static DOperator from_blocks(const BlockOperator& d);
  /// u -> [w, u].
  static DOperator inner(const APair& w);
  static DOperator identity();
};

/// ad*_{r(v)} u - ad*_{r(u)} v with ad*_X u~ = [u~, X], i.e. the swap of
/// [r u, v~] + [u~, r v].
EPair r_bracket(const EPair& u, const EPair& v, const RTensor& r);

/// [Ru, v] + [u, Rv].
APair R_bracket(const APair& u, const APair& v, const PairMap& R);

/// ((l,p) | [X,Y]_R).
CRat deformed_lie_poisson(const EPair& x, const EPair& y, const APair& point, const PairMap& R,
                          PairingGrade g = PairingGrade::Constant);

/// D[u,v] - [Du,v] - [u,Dv].
APair derivation_residual(const APair& u, const APair& v, const PairMap& d);
IdentityReport derivation_check(const DOperator& d, Ring ring, InstanceGenerator& gen, int samples,
                                const SparseShape& shape);

/// rho_r = pr_1 r; residual rho_r[[u,v]]_r - [rho_r u, rho_r v].
VecField anchor_hom_residual(const EPair& u, const EPair& v, const RTensor& r);
IdentityReport anchor_hom_check(const RTensor& r, Ring ring, InstanceGenerator& gen, int samples,
                                const SparseShape& shape);

}  // namespace cab
