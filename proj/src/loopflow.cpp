#include "cab/loopflow.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

#include "cab/error.hpp"
#include "cab/semidirect.hpp"

namespace cab {

bool Window::contains(const MultiIndex& idx) const {
  if (idx.loop < lo || idx.loop > hi) return false;
  for (int k : idx.torus)
    if (std::abs(k) > radius) return false;
  return true;
}

namespace {

const FPoly& component(const APair& u, int comp) {
  const int n = u.field.size();
  return comp < n ? u.field[comp] : u.form[comp - n];
}

FPoly& component(APair& u, int comp) {
  const int n = u.field.size();
  return comp < n ? u.field[comp] : u.form[comp - n];
}

template <class F>
APair map_components(const APair& u, F f) {
  APair r = u;
  for (int c = 0; c < 2 * u.field.size(); ++c) component(r, c) = f(component(u, c));
  return r;
}

bool inside(const APair& u, const Window& w) {
  for (int c = 0; c < 2 * u.field.size(); ++c)
    for (const auto& [idx, v] : component(u, c).terms())
      if (!w.contains(idx)) return false;
  return true;
}

}  // namespace

LoopPoint::LoopPoint(APair value, Window window) : value_(std::move(value)), window_(window) {
  require_same_shape(value_.field.size(), value_.form.size(), "loop point components");
  if (value_.field.size() == 0) throw DomainError("loop point needs at least one dimension");
  if (ring().flavor != Flavor::Fourier) throw DomainError("loop points live on a torus");
  if (window_.radius < 0 || window_.lo > window_.hi) throw DomainError("empty truncation window");
  if (!inside(value_, window_)) throw DomainError("loop point has a mode outside its window");
}

LoopPoint LoopPoint::zero(Ring ring, Window window) { return LoopPoint(APair::zero(ring), window); }

FPoly project_pm(const FPoly& f, LoopSign s) {
  FPoly r(f.ring());
  for (const auto& [idx, c] : f.terms())
    if ((idx.loop >= 0) == (s == LoopSign::Plus)) r.add(idx, c);
  return r;
}

APair project_pm(const APair& u, LoopSign s) {
  return map_components(u, [s](const FPoly& f) { return project_pm(f, s); });
}

EPair project_pm(const EPair& u, LoopSign s) { return to_epair(project_pm(to_apair(u), s)); }

EPair loop_split(const EPair& u) { return project_pm(u, LoopSign::Plus) - project_pm(u, LoopSign::Minus); }

Rational norm2(const APair& u) {
  Rational s = 0;
  for (int c = 0; c < 2 * u.field.size(); ++c) s += norm2(component(u, c));
  return s;
}

namespace casimirs {

CasimirSpec zero() {
  return {"zero", [](const APair& u) { return EPair::zero(u.field.ring()); }, [](const APair&) { return CRat(); }};
}

CasimirSpec linear(std::string name, EPair x) {
  const APair xa = to_apair(x);
  return {std::move(name), [x](const APair&) { return x; },
          [xa](const APair& u) { return sd_pairing(u, xa, PairingGrade::Residue); }};
}

CasimirSpec translation(Ring ring, const std::vector<Rational>& c) {
  require_same_shape(static_cast<int>(c.size()), ring.dim, "translation vector");
  EPair x = EPair::zero(ring);
  for (int j = 0; j < ring.dim; ++j) x.field[j] = FPoly::constant(ring, c[static_cast<std::size_t>(j)]);
  return linear("translation", x);
}

CasimirSpec quadratic(int s) {
  auto shift = [s](const APair& u) {
    return map_components(u, [s](const FPoly& f) { return shift_loop(f, s); });
  };
  return {"quadratic[" + std::to_string(s) + "]", [shift](const APair& u) { return to_epair(shift(u)); },
          [shift](const APair& u) {
            return CRat(Rational(1, 2)) * sd_pairing(u, shift(u), PairingGrade::Residue);
          }};
}

}  // namespace casimirs

FlowRhs flow_rhs(const LoopPoint& pt, const CasimirSpec& g) {
  const APair& mu = pt.value();
  const APair full = sd_bracket(to_apair(loop_split(g.gradient(mu))), mu);
  const Window& w = pt.window();
  FlowRhs r;
  r.tangent = map_components(full, [&w](const FPoly& f) { return w.restrict(f); });
  r.leak = full - r.tangent;
  r.retained_norm2 = norm2(r.tangent);
  r.leak_norm2 = norm2(r.leak);
  r.pre_norm2 = norm2(full);
  return r;
}

std::vector<BasisMode> window_basis(Ring ring, const Window& w) {
  std::vector<BasisMode> out;
  const int side = 2 * w.radius + 1;
  int count = 1;
  for (int j = 0; j < ring.dim; ++j) count *= side;
  for (int comp = 0; comp < 2 * ring.dim; ++comp)
    for (int m = w.lo; m <= w.hi; ++m)
      for (int code = 0; code < count; ++code) {
        BasisMode b;
        b.comp = comp;
        b.idx.loop = m;
        int rest = code;
        for (int j = ring.dim - 1; j >= 0; --j) {
          b.idx.torus[static_cast<std::size_t>(j)] = rest % side - w.radius;
          rest /= side;
        }
        out.push_back(b);
      }
  return out;
}

namespace {

using ModeKey = std::pair<int, MultiIndex>;

APair basis_element(Ring ring, const BasisMode& b, const CRat& c) {
  APair u = APair::zero(ring);
  component(u, b.comp).add(b.idx, c);
  return u;
}

// Deterministic dense test vector used to confirm the declared degree.
CRat probe_coefficient(int a) { return CRat(Rational(a % 3 - 1, 2), Rational(a % 5 - 2, 3)); }

class ModeIndex {
 public:
  explicit ModeIndex(const std::vector<BasisMode>& basis) : window_size_(static_cast<int>(basis.size())) {
    for (int a = 0; a < window_size_; ++a) index_[{basis[static_cast<std::size_t>(a)].comp, basis[static_cast<std::size_t>(a)].idx}] = a;
  }
  int operator()(const ModeKey& k, std::vector<BasisMode>& leak) {
    auto it = index_.find(k);
    if (it != index_.end()) return it->second;
    const int id = window_size_ + static_cast<int>(leak.size());
    leak.push_back({k.first, k.second});
    index_.emplace(k, id);
    return id;
  }

 private:
  int window_size_;
  std::map<ModeKey, int> index_;
};

std::map<int, CRat> scatter(const APair& u, ModeIndex& index, std::vector<BasisMode>& leak) {
  std::map<int, CRat> out;
  for (int c = 0; c < 2 * u.field.size(); ++c)
    for (const auto& [idx, v] : component(u, c).terms()) out[index({c, idx}, leak)] += v;
  return out;
}

std::map<int, CRat> combine(const std::map<int, CRat>& a, const std::map<int, CRat>& b, const CRat& sb) {
  std::map<int, CRat> r = a;
  for (const auto& [k, v] : b) r[k] += sb * v;
  std::erase_if(r, [](const auto& kv) { return kv.second.is_zero(); });
  return r;
}

}  // namespace

CompiledFlow::CompiledFlow(Ring ring, Window w, const CasimirSpec& g)
    : ring_(ring), window_(w), name_(g.name), basis_(window_basis(ring, w)) {
  ModeIndex index(basis_);
  const int n = size();
  auto rhs = [&](const APair& u) {
    FlowRhs r = flow_rhs(LoopPoint(u, w), g);
    return scatter(r.tangent + r.leak, index, leak_);
  };
  std::vector<std::map<int, CRat>> plus(static_cast<std::size_t>(n));
  const CRat half(Rational(1, 2)), one(1), minus_one(-1);
  exact_.constant = rhs(APair::zero(ring));
  for (int a = 0; a < n; ++a) {
    const BasisMode& b = basis_[static_cast<std::size_t>(a)];
    auto p = combine(rhs(basis_element(ring, b, one)), exact_.constant, minus_one);
    auto m = combine(rhs(basis_element(ring, b, minus_one)), exact_.constant, minus_one);
    for (const auto& [out, v] : combine(p, m, minus_one)) exact_.linear.push_back({out, a, half * v});
    for (const auto& [out, v] : combine(p, m, one)) exact_.quadratic.push_back({out, a, a, half * v});
    plus[static_cast<std::size_t>(a)] = p;
  }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const APair u = basis_element(ring, basis_[static_cast<std::size_t>(a)], one) +
                      basis_element(ring, basis_[static_cast<std::size_t>(b)], one);
      auto q = combine(rhs(u), exact_.constant, minus_one);
      q = combine(q, plus[static_cast<std::size_t>(a)], minus_one);
      q = combine(q, plus[static_cast<std::size_t>(b)], minus_one);
      for (const auto& [out, v] : q) exact_.quadratic.push_back({out, a, b, v});
    }

  APair probe = APair::zero(ring);
  for (int a = 0; a < n; ++a) probe = probe + basis_element(ring, basis_[static_cast<std::size_t>(a)], probe_coefficient(a));
  std::map<int, CRat> expect = exact_.constant;
  for (const auto& e : exact_.linear) expect[e.out] += e.c * probe_coefficient(e.a);
  for (const auto& e : exact_.quadratic) expect[e.out] += e.c * probe_coefficient(e.a) * probe_coefficient(e.b);
  std::erase_if(expect, [](const auto& kv) { return kv.second.is_zero(); });
  if (rhs(probe) != expect) throw StructureError("gradient of '" + g.name + "' is not affine in the point");

  if (!exact_.constant.empty()) throw StructureError("flow of '" + g.name + "' does not fix the zero point");
  for (const auto& e : exact_.linear) lin_.push_back({e.out, e.a, -1, e.c.to_complex()});
  for (const auto& e : exact_.quadratic) quad_.push_back({e.out, e.a, e.b, e.c.to_complex()});
}

State CompiledFlow::encode(const LoopPoint& pt) const {
  if (!(pt.window() == window_) || !(pt.ring() == ring_)) throw DomainError("loop point does not match the compiled window");
  State y(basis_.size());
  for (std::size_t a = 0; a < basis_.size(); ++a)
    y[a] = component(pt.value(), basis_[a].comp).coeff(basis_[a].idx).to_complex();
  return y;
}

CompiledFlow::Eval CompiledFlow::eval(const State& y) const {
  if (y.size() != basis_.size()) throw DimensionMismatch("state size does not match the window basis");
  State full(basis_.size() + leak_.size());
  for (const auto& e : lin_) full[static_cast<std::size_t>(e.out)] += e.c * y[static_cast<std::size_t>(e.a)];
  for (const auto& e : quad_)
    full[static_cast<std::size_t>(e.out)] += e.c * y[static_cast<std::size_t>(e.a)] * y[static_cast<std::size_t>(e.b)];
  Eval r;
  r.tangent.assign(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(basis_.size()));
  for (std::size_t i = 0; i < full.size(); ++i) (i < basis_.size() ? r.retained2 : r.leak2) += std::norm(full[i]);
  return r;
}

CompiledFunctional::CompiledFunctional(Ring ring, Window w, const CasimirSpec& g) : name_(g.name) {
  if (!g.value) throw DomainError("functional '" + g.name + "' has no value rule");
  const auto basis = window_basis(ring, w);
  const int n = static_cast<int>(basis.size());
  const CRat one(1), minus_one(-1), half(Rational(1, 2));
  const CRat v0 = g.value(APair::zero(ring));
  std::vector<CRat> plus(static_cast<std::size_t>(n));
  CRat c0 = v0;
  std::vector<std::pair<int, CRat>> lin;
  std::vector<std::tuple<int, int, CRat>> quad;
  for (int a = 0; a < n; ++a) {
    const CRat p = g.value(basis_element(ring, basis[static_cast<std::size_t>(a)], one)) - v0;
    const CRat m = g.value(basis_element(ring, basis[static_cast<std::size_t>(a)], minus_one)) - v0;
    if (!(p - m).is_zero()) lin.emplace_back(a, half * (p - m));
    if (!(p + m).is_zero()) quad.emplace_back(a, a, half * (p + m));
    plus[static_cast<std::size_t>(a)] = p;
  }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const APair u = basis_element(ring, basis[static_cast<std::size_t>(a)], one) +
                      basis_element(ring, basis[static_cast<std::size_t>(b)], one);
      const CRat q = g.value(u) - v0 - plus[static_cast<std::size_t>(a)] - plus[static_cast<std::size_t>(b)];
      if (!q.is_zero()) quad.emplace_back(a, b, q);
    }
  APair probe = APair::zero(ring);
  for (int a = 0; a < n; ++a) probe = probe + basis_element(ring, basis[static_cast<std::size_t>(a)], probe_coefficient(a));
  CRat expect = c0;
  for (const auto& [a, c] : lin) expect += c * probe_coefficient(a);
  for (const auto& [a, b, c] : quad) expect += c * probe_coefficient(a) * probe_coefficient(b);
  if (!(g.value(probe) - expect).is_zero()) throw StructureError("value of '" + g.name + "' has degree above 2");

  c0_ = c0.to_complex();
  for (const auto& [a, c] : lin) lin_.emplace_back(a, c.to_complex());
  for (const auto& [a, b, c] : quad) quad_.emplace_back(a, b, c.to_complex());
}

std::complex<double> CompiledFunctional::operator()(const State& y) const {
  std::complex<double> s = c0_;
  for (const auto& [a, c] : lin_) s += c * y[static_cast<std::size_t>(a)];
  for (const auto& [a, b, c] : quad_) s += c * y[static_cast<std::size_t>(a)] * y[static_cast<std::size_t>(b)];
  return s;
}

namespace {

State axpy(const State& y, double h, const State& k) {
  State r = y;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += h * k[i];
  return r;
}

}  // namespace

State rk4_step(const CompiledFlow& f, const State& y, double dt) {
  const State k1 = f(y);
  const State k2 = f(axpy(y, dt / 2, k1));
  const State k3 = f(axpy(y, dt / 2, k2));
  const State k4 = f(axpy(y, dt, k3));
  State r = y;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += dt / 6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return r;
}

double l2_distance(const State& a, const State& b) {
  if (a.size() != b.size()) throw DimensionMismatch("state sizes differ");
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

double l2_norm(const State& a) { return l2_distance(a, State(a.size())); }

std::string to_string(ProjectionPolicy p) { return p == ProjectionPolicy::Hard ? "hard" : "strict"; }

double Trajectory::relative_drift(int i) const {
  if (diagnostics.empty()) return 0;
  const auto w0 = diagnostics.front().watched.at(static_cast<std::size_t>(i));
  double worst = 0;
  for (const auto& d : diagnostics) worst = std::max(worst, std::abs(d.watched[static_cast<std::size_t>(i)] - w0));
  return w0 == 0.0 ? worst : worst / std::abs(w0);
}

namespace {

constexpr double kOverflow = 1e150;

void check_finite(const State& y, int step) {
  for (const auto& z : y)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) > kOverflow) {
      std::ostringstream os;
      os << "trajectory left the finite range at step " << step;
      throw NumericalError(os.str(), step);
    }
}

void validate(const FlowConfig& cfg) {
  if (!(cfg.dt > 0) || !std::isfinite(cfg.dt)) throw DomainError("time step must be positive");
  if (cfg.steps < 0) throw DomainError("step count must be non-negative");
  if (cfg.snapshot_every < 0) throw DomainError("snapshot period must be non-negative");
  if (cfg.leak_tolerance < 0) throw DomainError("leak tolerance must be non-negative");
}

}  // namespace

Trajectory integrate(const CompiledFlow& f, const State& y0, const FlowConfig& cfg) {
  validate(cfg);
  if (!(cfg.window == f.window())) throw DomainError("config window differs from the compiled window");
  std::vector<CompiledFunctional> watch;
  for (const auto& g : cfg.watch) watch.emplace_back(f.ring(), f.window(), g);

  Trajectory tr;
  tr.basis = f.basis();
  State y = y0;
  check_finite(y, 0);
  int leak_steps = 0;
  for (int step = 0;; ++step) {
    const CompiledFlow::Eval e = f.eval(y);
    StepDiagnostics d;
    d.step = step;
    d.t = step * cfg.dt;
    d.retained2 = e.retained2;
    d.leak2 = e.leak2;
    for (const auto& w : watch) d.watched.push_back(w(y));
    tr.diagnostics.push_back(std::move(d));
    if (e.leak2 > cfg.leak_tolerance) {
      if (cfg.policy == ProjectionPolicy::Strict) {
        std::ostringstream os;
        os << "window leak " << e.leak2 << " exceeds tolerance at step " << step;
        throw DomainError(os.str());
      }
      if (leak_steps++ == 0) {
        std::ostringstream os;
        os << "step " << step << ": window leak " << e.leak2 << " exceeds tolerance " << cfg.leak_tolerance;
        tr.warnings.push_back(os.str());
      }
    }
    const bool snap = step == 0 || step == cfg.steps || (cfg.snapshot_every > 0 && step % cfg.snapshot_every == 0);
    if (snap) tr.snapshots.emplace_back(step, y);
    if (step == cfg.steps) break;
    y = rk4_step(f, y, cfg.dt);
    check_finite(y, step + 1);
  }
  if (leak_steps > 1) tr.warnings.push_back("window leak exceeded tolerance on " + std::to_string(leak_steps) + " steps");
  tr.final_state = y;
  return tr;
}

Trajectory integrate(const LoopPoint& pt0, const CasimirSpec& g, const FlowConfig& cfg) {
  validate(cfg);
  const CompiledFlow f(pt0.ring(), pt0.window(), g);
  return integrate(f, f.encode(pt0), cfg);
}

State translation_solution(const CompiledFlow& f, const State& y0, const std::vector<Rational>& c, double t) {
  require_same_shape(static_cast<int>(c.size()), f.ring().dim, "translation vector");
  State y = y0;
  for (std::size_t a = 0; a < y.size(); ++a) {
    double phase = 0;
    for (int j = 0; j < f.ring().dim; ++j)
      phase += c[static_cast<std::size_t>(j)].get_d() * f.basis()[a].idx.torus[static_cast<std::size_t>(j)];
    y[a] *= std::polar(1.0, phase * t);
  }
  return y;
}

OrderStudy convergence_order(const LoopPoint& pt0, const CasimirSpec& g, double t_final, double dt0, int levels) {
  if (levels < 3) throw DomainError("an order estimate needs at least three levels");
  if (!(t_final > 0) || !(dt0 > 0)) throw DomainError("final time and time step must be positive");
  const CompiledFlow f(pt0.ring(), pt0.window(), g);
  const State y0 = f.encode(pt0);
  OrderStudy s;
  std::vector<std::future<State>> runs;
  for (int l = 0; l < levels; ++l) {
    const double dt = dt0 / std::pow(2.0, l);
    s.dts.push_back(dt);
    const int steps = static_cast<int>(std::lround(t_final / dt));
    runs.push_back(std::async(std::launch::async, [&f, &y0, dt, steps] {
      State y = y0;
      for (int i = 0; i < steps; ++i) y = rk4_step(f, y, dt);
      return y;
    }));
  }
  std::vector<State> finals;
  for (auto& r : runs) finals.push_back(r.get());
  for (int l = 0; l + 1 < levels; ++l)
    s.diffs.push_back(l2_distance(finals[static_cast<std::size_t>(l)], finals[static_cast<std::size_t>(l + 1)]));
  for (std::size_t l = 0; l + 1 < s.diffs.size(); ++l) s.orders.push_back(std::log2(s.diffs[l] / s.diffs[l + 1]));
  s.order = *std::min_element(s.orders.begin(), s.orders.end());
  double scale = 0;
  for (const auto& y : finals) scale = std::max(scale, l2_norm(y));
  s.rounding_floor = rounding_floor(scale);
  s.resolved = *std::min_element(s.diffs.begin(), s.diffs.end()) > s.rounding_floor;
  return s;
}

double rounding_floor(double scale) { return 1e-12 * std::max(1.0, scale); }

CommuteProbe flow_commute_probe(const LoopPoint& pt0, const CasimirSpec& g1, const CasimirSpec& g2,
                                const std::vector<double>& dts) {
  const CompiledFlow f1(pt0.ring(), pt0.window(), g1), f2(pt0.ring(), pt0.window(), g2);
  const State y0 = f1.encode(pt0);
  CommuteProbe p;
  p.dts = dts;
  for (double dt : dts) {
    if (!(dt > 0)) throw DomainError("time step must be positive");
    const State a = rk4_step(f1, rk4_step(f2, y0, dt), dt);
    const State b = rk4_step(f2, rk4_step(f1, y0, dt), dt);
    p.gaps.push_back(l2_distance(a, b));
  }
  p.exact_zero = std::all_of(p.gaps.begin(), p.gaps.end(), [](double g) { return g == 0; });
  p.rounding_floor = rounding_floor(l2_norm(y0));
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < dts.size(); ++i)
    if (p.gaps[i] > p.rounding_floor) pts.emplace_back(std::log(dts[i]), std::log(p.gaps[i]));
  if (pts.size() >= 2) {
    double mx = 0, my = 0;
    for (const auto& [x, y] : pts) mx += x, my += y;
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxy = 0, sxx = 0;
    for (const auto& [x, y] : pts) sxy += (x - mx) * (y - my), sxx += (x - mx) * (x - mx);
    if (sxx > 0) p.order = sxy / sxx;
  }
  return p;
}

}  // namespace cab
