#include "cab/semidirect.hpp"

#include <set>

#include "cab/error.hpp"

namespace cab {

APair sd_bracket(const APair& u, const APair& v) {
  require_same_shape(u.field.size(), v.field.size(), "semidirect pair dimension");
  return {vf_bracket(u.field, v.field), coad(v.field, u.form) - coad(u.field, v.form)};
}

std::string to_string(PairingGrade g) { return g == PairingGrade::Constant ? "constant" : "residue"; }

FPoly sd_pairing_series(const APair& u, const APair& v) {
  require_same_shape(u.field.size(), v.field.size(), "pairing dimension");
  return mean(contract(u.form, v.field) + contract(v.form, u.field));
}

CRat sd_pairing(const APair& u, const APair& v, PairingGrade g) {
  const FPoly s = sd_pairing_series(u, v);
  return (g == PairingGrade::Constant ? s : residue(s)).constant_term();
}

CRat sd_pairing(const APair& u, const EPair& v, PairingGrade g) { return sd_pairing(u, to_apair(v), g); }

CRat lie_poisson(const EPair& x, const EPair& y, const APair& point, PairingGrade g) {
  return sd_pairing(point, sd_bracket(to_apair(x), to_apair(y)), g);
}

BlockOperator::BlockOperator(int n, BlockFn fn, std::string name) : n_(n), fn_(std::move(fn)), name_(std::move(name)) {
  if (n < 1 || n > kMaxDim) throw DomainError("block operator dimension out of range");
}

BlockOperator BlockOperator::uniform(int n, const CMatrix& block, std::string name) {
  if (block.rows() != 2 * n || block.cols() != 2 * n) throw DimensionMismatch("block size must be 2n x 2n");
  return BlockOperator(n, [block](int) { return std::optional<CMatrix>(block); }, std::move(name));
}

BlockOperator BlockOperator::identity(int n) { return uniform(n, CMatrix::identity(2 * n), "identity"); }

BlockOperator BlockOperator::zero(int n) { return uniform(n, CMatrix(2 * n, 2 * n), "zero"); }

BlockOperator BlockOperator::table(int n, std::map<int, CMatrix> blocks, int split, const CMatrix& below,
                                   const CMatrix& above, std::string name) {
  auto check = [n](const CMatrix& b) {
    if (b.rows() != 2 * n || b.cols() != 2 * n) throw DimensionMismatch("block size must be 2n x 2n");
  };
  for (const auto& [m, b] : blocks) check(b);
  check(below);
  check(above);
  return BlockOperator(
      n,
      [blocks = std::move(blocks), split, below, above](int m) {
        auto it = blocks.find(m);
        if (it != blocks.end()) return std::optional<CMatrix>(it->second);
        return std::optional<CMatrix>(m < split ? below : above);
      },
      std::move(name));
}

BlockOperator BlockOperator::loop_plus(int n) {
  return table(n, {}, 0, CMatrix(2 * n, 2 * n), CMatrix::identity(2 * n), "loop-plus");
}

BlockOperator BlockOperator::loop_minus(int n) {
  return table(n, {}, 0, CMatrix::identity(2 * n), CMatrix(2 * n, 2 * n), "loop-minus");
}

BlockOperator BlockOperator::loop_splitting(int n) {
  return table(n, {}, 0, CRat(-1) * CMatrix::identity(2 * n), CMatrix::identity(2 * n), "loop-splitting");
}

BlockOperator BlockOperator::grading(int n) {
  return BlockOperator(
      n, [n](int m) { return std::optional<CMatrix>(CRat(m) * CMatrix::identity(2 * n)); }, "grading");
}

APair BlockOperator::apply(const APair& u) const {
  require_same_shape(u.field.size(), n_, "block operator dimension");
  const Ring ring = u.field.ring();
  auto comp = [&](const APair& p, int j) -> const FPoly& { return j < n_ ? p.field[j] : p.form[j - n_]; };

  std::set<MultiIndex> support;
  for (int j = 0; j < 2 * n_; ++j)
    for (const auto& [idx, c] : comp(u, j).terms()) support.insert(idx);

  APair out = APair::zero(ring);
  std::map<int, std::optional<CMatrix>> cache;
  for (const MultiIndex& idx : support) {
    auto it = cache.find(idx.loop);
    if (it == cache.end()) it = cache.emplace(idx.loop, fn_(idx.loop)).first;
    if (!it->second) throw KernelError(name_ + " undefined on loop mode " + std::to_string(idx.loop));
    const CMatrix& b = *it->second;
    std::vector<CRat> x;
    for (int j = 0; j < 2 * n_; ++j) x.push_back(comp(u, j).coeff(idx));
    const std::vector<CRat> y = b * x;
    for (int j = 0; j < 2 * n_; ++j) {
      if (y[static_cast<std::size_t>(j)].is_zero()) continue;
      FPoly& dst = j < n_ ? out.field[j] : out.form[j - n_];
      dst.add(idx, y[static_cast<std::size_t>(j)]);
    }
  }
  return out;
}

PairMap BlockOperator::as_map() const {
  return [op = *this](const APair& u) { return op.apply(u); };
}

namespace {

CMatrix swap_halves(int n) {
  CMatrix j(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    j(i, n + i) = 1;
    j(n + i, i) = 1;
  }
  return j;
}

using OptBlock = std::optional<CMatrix>;

BlockOperator combine(const BlockOperator& a, const BlockOperator& b, std::string name,
                      std::function<CMatrix(const CMatrix&, const CMatrix&)> op) {
  require_same_shape(a.dim(), b.dim(), "block operator dimension");
  return BlockOperator(
      a.dim(),
      [a, b, op = std::move(op)](int m) -> OptBlock {
        OptBlock x = a.block(m), y = b.block(m);
        if (!x || !y) return std::nullopt;
        return op(*x, *y);
      },
      std::move(name));
}

}  // namespace

BlockOperator BlockOperator::adjoint(PairingGrade g) const {
  const CMatrix j = swap_halves(n_);
  return BlockOperator(
      n_,
      [self = *this, j, g](int m) -> OptBlock {
        OptBlock b = self.block(g == PairingGrade::Residue ? -1 - m : -m);
        if (!b) return std::nullopt;
        return j * b->transpose() * j;
      },
      name_ + "^dagger");
}

BlockOperator BlockOperator::inverse() const {
  return BlockOperator(
      n_,
      [self = *this](int m) -> OptBlock {
        OptBlock b = self.block(m);
        if (!b) return std::nullopt;
        return cab::inverse(*b);
      },
      name_ + "^-1");
}

BlockOperator operator+(const BlockOperator& a, const BlockOperator& b) {
  return combine(a, b, "(" + a.name() + "+" + b.name() + ")", [](const CMatrix& x, const CMatrix& y) { return x + y; });
}

BlockOperator operator-(const BlockOperator& a, const BlockOperator& b) {
  return combine(a, b, "(" + a.name() + "-" + b.name() + ")", [](const CMatrix& x, const CMatrix& y) { return x - y; });
}

BlockOperator operator*(const BlockOperator& a, const BlockOperator& b) {
  return combine(a, b, a.name() + "*" + b.name(), [](const CMatrix& x, const CMatrix& y) { return x * y; });
}

BlockOperator operator*(const CRat& s, const BlockOperator& a) {
  return BlockOperator(
      a.dim(),
      [a, s](int m) -> OptBlock {
        OptBlock b = a.block(m);
        if (!b) return std::nullopt;
        return s * *b;
      },
      to_string(s) + "*" + a.name());
}

RTensor::RTensor(BlockOperator r, PairingGrade g)
    : r_(r),
      grade_(g),
      k_(CRat(Rational(1, 2)) * (r + r.adjoint(g))),
      eta_(CRat(Rational(1, 2)) * (r - r.adjoint(g))),
      eta_inv_(eta_.inverse()) {}

DOperator DOperator::from_rtensor(const RTensor& r) { return from_blocks(r.k() * r.eta_inv()); }

DOperator DOperator::from_blocks(const BlockOperator& d) {
  return {d.name(), d.as_map(), d.inverse().as_map()};
}

DOperator DOperator::inner(const APair& w) {
  return {"inner", [w](const APair& u) { return sd_bracket(w, u); }, std::nullopt};
}

DOperator DOperator::identity() {
  return {"identity", [](const APair& u) { return u; }, PairMap([](const APair& u) { return u; })};
}

EPair r_bracket(const EPair& u, const EPair& v, const RTensor& r) {
  const APair ut = to_apair(u), vt = to_apair(v);
  return to_epair(sd_bracket(r.apply(u), vt) + sd_bracket(ut, r.apply(v)));
}

APair R_bracket(const APair& u, const APair& v, const PairMap& R) {
  return sd_bracket(R(u), v) + sd_bracket(u, R(v));
}

CRat deformed_lie_poisson(const EPair& x, const EPair& y, const APair& point, const PairMap& R, PairingGrade g) {
  return sd_pairing(point, R_bracket(to_apair(x), to_apair(y), R), g);
}

APair derivation_residual(const APair& u, const APair& v, const PairMap& d) {
  return d(sd_bracket(u, v)) - sd_bracket(d(u), v) - sd_bracket(u, d(v));
}

namespace {

std::string render(const APair& p) {
  std::string s = "field(";
  for (int j = 0; j < p.field.size(); ++j) s += (j ? ", " : "") + to_string(p.field[j]);
  s += ") form(";
  for (int j = 0; j < p.form.size(); ++j) s += (j ? ", " : "") + to_string(p.form[j]);
  return s + ")";
}

}  // namespace

IdentityReport derivation_check(const DOperator& d, Ring ring, InstanceGenerator& gen, int samples,
                                const SparseShape& shape) {
  IdentityReport rep;
  rep.identity = "derivation:" + d.name;
  for (int t = 0; t < samples; ++t) {
    const APair u = gen.apair(ring, shape);
    const APair v = gen.apair(ring, shape);
    const APair res = derivation_residual(u, v, d.d);
    rep.record(res.is_zero(), res.is_zero() ? "" : render(res));
  }
  return rep;
}

VecField anchor_hom_residual(const EPair& u, const EPair& v, const RTensor& r) {
  auto rho = [&](const EPair& x) { return r.apply(x).field; };
  return rho(r_bracket(u, v, r)) - vf_bracket(rho(u), rho(v));
}

IdentityReport anchor_hom_check(const RTensor& r, Ring ring, InstanceGenerator& gen, int samples,
                                const SparseShape& shape) {
  IdentityReport rep;
  rep.identity = "anchor-homomorphism:" + r.r().name();
  for (int t = 0; t < samples; ++t) {
    const EPair u = gen.epair(ring, shape);
    const EPair v = gen.epair(ring, shape);
    const VecField res = anchor_hom_residual(u, v, r);
    std::string text;
    if (!res.is_zero())
      for (int j = 0; j < res.size(); ++j) text += (j ? ", " : "") + to_string(res[j]);
    rep.record(res.is_zero(), text);
  }
  return rep;
}

}  // namespace cab
