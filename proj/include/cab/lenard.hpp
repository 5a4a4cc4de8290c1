#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cab/algebroid.hpp"

namespace cab {

/// d_E-preimage over an algebroid with constant invertible anchor and zero
/// structure functions: the coframe is changed to dx, the de Rham preimage
/// is taken, and the result is changed back.
struct EPreimage {
  bool supported = false;
  std::string reason;
  KForm potential;
  KForm obstruction;
  KForm defect;

  bool closed() const { return supported && defect.is_zero(); }
  bool exact() const { return closed() && obstruction.is_zero(); }
};

EPreimage d_E_preimage(const KForm& w, const FPAlgebroid& e);

/// Function with zero chart mean: the x-independent part removed.
FPoly zero_mean(const FPoly& f);

enum class HamStatus { Global, LocalOnly };
std::string to_string(HamStatus s);

struct HamiltonianResult {
  HamStatus status = HamStatus::Global;
  FPoly h;
  /// Part of -i_K w that no function produces; zero when Global.
  KForm obstruction;
};

/// Solves i_K w = -d_E H. Throws StructureError when d_E w != 0,
/// L_K w != 0 or the preimage is unsupported.
HamiltonianResult hamiltonian_of(const Section& k, const KForm& omega, const FPAlgebroid& e);

/// Section K_f with i_{K_f} w = -d_E f. The Gram matrix w(A_a, A_b) is
/// inverted by adjugate; throws KernelError unless its determinant is a
/// nonzero constant.
Section hamiltonian_section(const FPoly& f, const KForm& omega, const FPAlgebroid& e);

enum class StepStatus { Ok, Remainder };

struct LenardStep {
  StepStatus status = StepStatus::Ok;
  /// H_{j+1} with d_E H_{j+1} = d_E* H_j, zero chart mean.
  FPoly next;
  /// d_E*-image part without a potential (status Remainder).
  KForm remainder;
};

/// Throws StructureError if d_E* H is not d_E-closed.
LenardStep lenard_step(const FPoly& h, const DStar& dstar, const FPAlgebroid& e);

/// Hamiltonians, symplectic forms and flows of one Lenard chain. Index j is
/// 0-based here (H_1 is hams[0]).
struct LenardState {
  FPAlgebroid algebroid;
  QMap q;
  DStar dstar;
  Section seed;
  std::vector<KForm> omegas;
  std::vector<KForm> betas;
  std::vector<FPoly> hams;
  std::vector<Section> flows;
  std::string ham_stop;
  std::string omega_stop;
};

/// Recursion from seed K and w_1: H_1 from (K, w_1), H_{j+1} by lenard_step,
/// w_{j+1} = d_E(Q* beta_j) with d_E beta_j = w_j, K_j the Hamiltonian
/// section of H_1 for w_j. Stops at `cap` entries or at the first zero /
/// obstructed step, recording why. Throws StructureError if Q is rejected or
/// the seed is not globally Hamiltonian.
LenardState build_hierarchy(const FPAlgebroid& e, const QMap& q, const Section& seed, const KForm& omega1,
                            int cap = 6);

/// w_s(K_f, K_g); s is 0-based.
FPoly poisson_s(const FPoly& f, const FPoly& g, int s, const LenardState& state);

struct CertificateEntry {
  std::string identity;
  bool zero = true;
  std::string residual;
};

struct LenardCertificate {
  std::vector<CertificateEntry> entries;
  bool certified() const;
  /// First failing identity, empty when certified.
  std::string first_failure() const;
};

/// Closedness of every stored w_j under d_E and d_E*, i_K w_j = -d_E H_j,
/// {H_i, H_j}_s = 0 and [K_i, K_j] = 0 over all stored indices.
LenardCertificate certify(const LenardState& state);

struct LenardProblem {
  std::string name;
  FPAlgebroid algebroid;
  QMap q;
  Section seed;
  KForm omega;
  int cap;
};

namespace presets {

/// T(R^4), w = dx1^dy1 + dx2^dy2, K = -y1 d_x1 + x1 d_y1 - y2 d_x2 + x2 d_y2,
/// Q_j = l_{b(j)} E_jj with scales (l1, l1, l2, l2).
LenardProblem oscillator(const Rational& l1 = 2, const Rational& l2 = 3, int cap = 4);
/// Oscillator data with Q = 0.
LenardProblem oscillator_zero_q();
/// Oscillator with scales (2, 3, 5, 7): d_E* is certified but splits each
/// canonical pair, so the chain is not in involution.
LenardProblem oscillator_split_pairs();
/// Oscillator with (Q_1)^1_2 = 1: d_E* fails nilpotency on x1.
LenardProblem oscillator_incompatible_q();
/// T^2 with w = dx^dy and K = d_x: only locally Hamiltonian.
LenardProblem torus_translation();

}  // namespace presets

}  // namespace cab
