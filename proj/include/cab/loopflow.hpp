#pragma once

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cab/fields.hpp"

namespace cab {

/// Fourier radius and loop band of a truncation.
struct Window {
  int radius = 1;
  int lo = -1;
  int hi = 1;

  bool contains(const MultiIndex& idx) const;
  FPoly restrict(const FPoly& f) const { return restrict_window(f, radius, lo, hi); }
  friend bool operator==(const Window&, const Window&) = default;
};

/// Point (p, l) of the loop semidirect dual over T^n, stored as an APair
/// (field p, form l). Every stored mode lies in the window.
class LoopPoint {
 public:
  LoopPoint(APair value, Window window);
  static LoopPoint zero(Ring ring, Window window);

  const APair& value() const { return value_; }
  const Window& window() const { return window_; }
  Ring ring() const { return value_.field.ring(); }
  int dim() const { return value_.field.size(); }

 private:
  APair value_;
  Window window_;
};

enum class LoopSign { Plus, Minus };

/// P+ keeps loop modes >= 0, P- keeps loop modes < 0.
FPoly project_pm(const FPoly& f, LoopSign s);
APair project_pm(const APair& u, LoopSign s);
EPair project_pm(const EPair& u, LoopSign s);
/// R = P+ - P-.
EPair loop_split(const EPair& u);

Rational norm2(const APair& u);

/// Functional on loop points with a declared gradient under the residue
/// pairing. Compilation requires the gradient to be affine and the value to
/// be of degree <= 2 in the point.
struct CasimirSpec {
  std::string name;
  std::function<EPair(const APair&)> gradient;
  std::function<CRat(const APair&)> value;
};

namespace casimirs {

CasimirSpec zero();
/// <mu, x>; constant gradient x.
CasimirSpec linear(std::string name, EPair x);
/// <mu, c_j d_j> with c constant at lambda^0: a translation flow.
CasimirSpec translation(Ring ring, const std::vector<Rational>& c);
/// 1/2 <mu, lambda^s mu>; gradient lambda^s mu. ad*_{grad} mu = 0 for every mu.
CasimirSpec quadratic(int s);

}  // namespace casimirs

/// Right-hand side of d mu/dt = -ad*_{R grad} mu = [R grad, mu], split into
/// the part kept by the window and the part it drops.
struct FlowRhs {
  APair tangent;
  APair leak;
  Rational retained_norm2;
  Rational leak_norm2;
  Rational pre_norm2;
};

FlowRhs flow_rhs(const LoopPoint& pt, const CasimirSpec& g);

/// One window coefficient: component (fields 0..n-1, then forms n..2n-1)
/// and mode.
struct BasisMode {
  int comp = 0;
  MultiIndex idx;
};

using State = std::vector<std::complex<double>>;

/// Window basis in a fixed order: component, then loop mode, then torus modes.
std::vector<BasisMode> window_basis(Ring ring, const Window& w);

/// Sum of c * y_a (* y_b) terms with exact coefficients.
struct ExactPoly {
  struct Linear {
    int out, a;
    CRat c;
  };
  struct Quadratic {
    int out, a, b;
    CRat c;
  };
  std::map<int, CRat> constant;
  std::vector<Linear> linear;
  std::vector<Quadratic> quadratic;
};

/// The flow rhs of one spec as an explicit quadratic polynomial in the window
/// coefficients, built exactly by polarization of `flow_rhs` and converted to
/// complex<double> once. Outputs past the window are leak modes.
class CompiledFlow {
 public:
  CompiledFlow(Ring ring, Window w, const CasimirSpec& g);

  Ring ring() const { return ring_; }
  const Window& window() const { return window_; }
  const std::string& name() const { return name_; }
  const std::vector<BasisMode>& basis() const { return basis_; }
  int size() const { return static_cast<int>(basis_.size()); }
  const std::vector<BasisMode>& leak_modes() const { return leak_; }
  const ExactPoly& exact() const { return exact_; }

  State encode(const LoopPoint& pt) const;

  struct Eval {
    State tangent;
    double retained2 = 0;
    double leak2 = 0;
  };
  Eval eval(const State& y) const;
  State operator()(const State& y) const { return eval(y).tangent; }

 private:
  struct FEntry {
    int out, a, b;
    std::complex<double> c;
  };

  Ring ring_;
  Window window_;
  std::string name_;
  std::vector<BasisMode> basis_;
  std::vector<BasisMode> leak_;
  ExactPoly exact_;
  std::vector<FEntry> lin_;
  std::vector<FEntry> quad_;
};

/// Value of a spec as a polynomial of degree <= 2 in the window coefficients.
class CompiledFunctional {
 public:
  CompiledFunctional(Ring ring, Window w, const CasimirSpec& g);
  const std::string& name() const { return name_; }
  std::complex<double> operator()(const State& y) const;

 private:
  std::string name_;
  std::complex<double> c0_;
  std::vector<std::pair<int, std::complex<double>>> lin_;
  std::vector<std::tuple<int, int, std::complex<double>>> quad_;
};

State rk4_step(const CompiledFlow& f, const State& y, double dt);
double l2_distance(const State& a, const State& b);
double l2_norm(const State& a);

/// Hard: project and account for the leak. Strict: abort when the leak
/// exceeds the tolerance.
enum class ProjectionPolicy { Hard, Strict };
std::string to_string(ProjectionPolicy p);

struct FlowConfig {
  double dt = 1e-3;
  int steps = 100;
  Window window;
  ProjectionPolicy policy = ProjectionPolicy::Hard;
  /// Squared norm of the dropped rhs part above which a warning is recorded.
  double leak_tolerance = 0;
  std::vector<CasimirSpec> watch;
  /// Snapshot period in steps; 0 keeps only the first and last state.
  int snapshot_every = 0;
};

struct StepDiagnostics {
  int step = 0;
  double t = 0;
  std::vector<std::complex<double>> watched;
  double retained2 = 0;
  double leak2 = 0;
};

struct Trajectory {
  std::vector<BasisMode> basis;
  std::vector<std::pair<int, State>> snapshots;
  /// One row per step index 0..steps; rhs norms are taken at the row's state.
  std::vector<StepDiagnostics> diagnostics;
  std::vector<std::string> warnings;
  State final_state;

  /// max_t |w(t) - w(0)| / |w(0)| for watched functional i.
  double relative_drift(int i) const;
};

/// Classical RK4 with per-step diagnostics. Throws DomainError on an invalid
/// config and NumericalError on a non-finite or overflowing state.
Trajectory integrate(const LoopPoint& pt0, const CasimirSpec& g, const FlowConfig& cfg);
Trajectory integrate(const CompiledFlow& f, const State& y0, const FlowConfig& cfg);

/// Closed form of the translation flow: mode k picks up exp(i t c.k).
State translation_solution(const CompiledFlow& f, const State& y0, const std::vector<Rational>& c, double t);

/// Successive differences of final states under dt halving; order is the
/// smallest observed log2 ratio. Unresolved when some difference is below the
/// rounding floor, in which case the ratios measure noise.
struct OrderStudy {
  std::vector<double> dts;
  std::vector<double> diffs;
  std::vector<double> orders;
  double order = 0;
  double rounding_floor = 0;
  bool resolved = false;
};

OrderStudy convergence_order(const LoopPoint& pt0, const CasimirSpec& g, double t_final, double dt0, int levels = 4);

/// One-step gap |Phi_1 Phi_2 y - Phi_2 Phi_1 y| per dt and its least-squares
/// order in dt over the gaps above the rounding floor.
struct CommuteProbe {
  std::vector<double> dts;
  std::vector<double> gaps;
  bool exact_zero = false;
  double rounding_floor = 0;
  std::optional<double> order;
};

/// Differences below this are indistinguishable from accumulated rounding.
double rounding_floor(double scale);

CommuteProbe flow_commute_probe(const LoopPoint& pt0, const CasimirSpec& g1, const CasimirSpec& g2,
                                const std::vector<double>& dts);

}  // namespace cab
