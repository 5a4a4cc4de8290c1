#include "cab/algebroid.hpp"

#include <bit>
#include <tuple>

#include "cab/error.hpp"

namespace cab {

namespace {

std::string e_name(int i) { return "A" + std::to_string(i + 1); }

}  // namespace

FPAlgebroid::FPAlgebroid(std::string name, Ring ring, std::vector<VecField> anchors,
                         std::vector<std::vector<std::vector<FPoly>>> structure)
    : name_(std::move(name)), ring_(ring), anchor_(std::move(anchors)), c_(std::move(structure)) {
  const int m = rank();
  if (m < 1 || m > 31) throw DomainError("algebroid rank out of range");
  for (const auto& a : anchor_) {
    require_same_shape(a.size(), ring_.dim, "anchor row length vs base dimension");
    if (a.ring() != ring_) throw DimensionMismatch("anchor ring mismatch");
  }
  require_same_shape(static_cast<int>(c_.size()), m, "structure function count");
  for (const auto& ck : c_) {
    require_same_shape(static_cast<int>(ck.size()), m, "structure function rows");
    for (const auto& row : ck) {
      require_same_shape(static_cast<int>(row.size()), m, "structure function columns");
      for (const auto& f : row)
        if (f.ring() != ring_) throw DimensionMismatch("structure function ring mismatch");
    }
  }

  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j)
        if (!(c(k, i, j) + c(k, j, i)).is_zero())
          throw StructureError(name_ + ": bracket not antisymmetric on [" + e_name(i) + "," + e_name(j) + "]");

  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      VecField res = vf_bracket(anchor(i), anchor(j));
      for (int k = 0; k < m; ++k)
        if (!c(k, i, j).is_zero()) res -= c(k, i, j) * anchor(k);
      if (!res.is_zero())
        throw StructureError(name_ + ": anchor is not a homomorphism on [" + e_name(i) + "," + e_name(j) + "]");
    }

  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int l = j + 1; l < m; ++l)
        for (int t = 0; t < m; ++t) {
          FPoly sum(ring_);
          for (auto [a, b, d] : {std::tuple{i, j, l}, std::tuple{j, l, i}, std::tuple{l, i, j}}) {
            sum += apply(anchor(a), c(t, b, d));
            for (int s = 0; s < m; ++s)
              if (!c(s, b, d).is_zero()) sum += c(s, b, d) * c(t, a, s);
          }
          if (!sum.is_zero())
            throw StructureError(name_ + ": Jacobi fails on (" + e_name(i) + "," + e_name(j) + "," + e_name(l) +
                                 ") at " + e_name(t));
        }
}

FPAlgebroid FPAlgebroid::tangent(Ring ring, std::string name) {
  const int d = ring.dim;
  std::vector<VecField> anchor;
  for (int i = 0; i < d; ++i) {
    VecField a = VecField::zero(ring);
    a[i] = FPoly::constant(ring, 1);
    anchor.push_back(std::move(a));
  }
  std::vector<std::vector<std::vector<FPoly>>> c(
      static_cast<std::size_t>(d),
      std::vector<std::vector<FPoly>>(static_cast<std::size_t>(d), std::vector<FPoly>(static_cast<std::size_t>(d), FPoly(ring))));
  return FPAlgebroid(std::move(name), ring, std::move(anchor), std::move(c));
}

FPAlgebroid FPAlgebroid::zero_anchor(std::string name, Ring ring, int rank,
                                     const std::vector<std::tuple<int, int, int, Rational>>& brackets) {
  const auto m = static_cast<std::size_t>(rank);
  std::vector<std::vector<std::vector<FPoly>>> c(
      m, std::vector<std::vector<FPoly>>(m, std::vector<FPoly>(m, FPoly(ring))));
  for (const auto& [i, j, k, v] : brackets) {
    if (i < 0 || j < 0 || k < 0 || i >= rank || j >= rank || k >= rank)
      throw DomainError("structure constant index out of range");
    c[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = FPoly::constant(ring, v);
    c[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = FPoly::constant(ring, Rational(-v));
  }
  return FPAlgebroid(std::move(name), ring, std::vector<VecField>(m, VecField::zero(ring)), std::move(c));
}

FPAlgebroid FPAlgebroid::so3_zero_anchor() {
  return zero_anchor("so3-zero-anchor", chart(1), 3, {{0, 1, 2, 1}, {1, 2, 0, 1}, {2, 0, 1, 1}});
}

FPAlgebroid FPAlgebroid::oscillator() { return tangent(chart(4), "oscillator-r4"); }

bool FPAlgebroid::abelian() const {
  for (const auto& ck : c_)
    for (const auto& row : ck)
      for (const auto& f : row)
        if (!f.is_zero()) return false;
  return true;
}

VecField FPAlgebroid::rho(const Section& s) const {
  require_same_shape(s.size(), rank(), "section rank");
  VecField r = VecField::zero(ring_);
  for (int i = 0; i < rank(); ++i)
    if (!s[i].is_zero()) r += s[i] * anchor(i);
  return r;
}

Section FPAlgebroid::bracket(const Section& x, const Section& y) const {
  require_same_shape(x.size(), rank(), "section rank");
  require_same_shape(y.size(), rank(), "section rank");
  const VecField rx = rho(x), ry = rho(y);
  Section r = Section::zero(ring_, rank());
  for (int k = 0; k < rank(); ++k) r[k] = apply(rx, y[k]) - apply(ry, x[k]);
  for (int i = 0; i < rank(); ++i)
    for (int j = 0; j < rank(); ++j) {
      if (x[i].is_zero() || y[j].is_zero()) continue;
      const FPoly xy = x[i] * y[j];
      for (int k = 0; k < rank(); ++k)
        if (!c(k, i, j).is_zero()) r[k] += xy * c(k, i, j);
    }
  return r;
}

OddDerivation::OddDerivation(std::string name, Ring ring, std::vector<VecField> x, std::vector<KForm> on_coframe)
    : name_(std::move(name)), ring_(ring), x_(std::move(x)), on_coframe_(std::move(on_coframe)) {
  require_same_shape(static_cast<int>(on_coframe_.size()), rank(), "coframe image count");
  for (const auto& v : x_) require_same_shape(v.size(), ring_.dim, "derivation field dimension");
  for (const auto& w : on_coframe_) {
    require_same_shape(w.rank(), rank(), "coframe image rank");
    if (w.degree() != 2) throw DomainError("coframe image must be a 2-form");
  }
}

KForm OddDerivation::apply(const KForm& w) const {
  require_same_shape(w.rank(), rank(), "form rank");
  const int m = rank();
  KForm out(ring_, m, w.degree() + 1);
  for (const auto& [mask, f] : w.components()) {
    // d f ^ e^I
    for (int j = 0; j < m; ++j) {
      const IndexMask bit = IndexMask{1} << j;
      if (mask & bit) continue;
      FPoly xf = cab::apply(x(j), f);
      if (xf.is_zero()) continue;
      out.add(mask | bit, wedge_sign(bit, mask) == 1 ? xf : -xf);
    }
    // f e^{i0} ^ .. ^ D(e^{ir}) ^ .. with sign (-1)^r
    int pos = 0;
    for (IndexMask rest = mask; rest != 0; rest &= rest - 1, ++pos) {
      const int ir = std::countr_zero(rest);
      const IndexMask below = mask & ((IndexMask{1} << ir) - 1);
      const IndexMask above = mask & ~((IndexMask{1} << (ir + 1)) - 1);
      for (const auto& [m2, g] : on_coframe(ir).components()) {
        const int s1 = wedge_sign(below, m2);
        if (s1 == 0) continue;
        const int s2 = wedge_sign(below | m2, above);
        if (s2 == 0) continue;
        const int sign = s1 * s2 * (pos % 2 == 0 ? 1 : -1);
        FPoly term = f * g;
        out.add(below | m2 | above, sign == 1 ? term : -term);
      }
    }
  }
  return out;
}

OddDerivation de_differential(const FPAlgebroid& e) {
  const int m = e.rank();
  std::vector<VecField> x;
  std::vector<KForm> dc;
  for (int k = 0; k < m; ++k) {
    x.push_back(e.anchor(k));
    KForm w = e.zero_form(2);
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        if (!e.c(k, i, j).is_zero()) w.add((IndexMask{1} << i) | (IndexMask{1} << j), -e.c(k, i, j));
    dc.push_back(std::move(w));
  }
  return OddDerivation("d_E", e.ring(), std::move(x), std::move(dc));
}

KForm d_E(const KForm& w, const FPAlgebroid& e) {
  if (w.degree() >= e.rank())
    throw DomainError("d_E degree overflow: degree " + std::to_string(w.degree()) + " on rank " +
                      std::to_string(e.rank()));
  return de_differential(e).apply(w);
}

KForm lie_E(const Section& a, const KForm& w, const FPAlgebroid& e) {
  require_same_shape(a.size(), e.rank(), "section rank");
  if (w.degree() == 0) return KForm::function(apply(e.rho(a), w.as_function()), e.rank());
  const OddDerivation d = de_differential(e);
  return interior(a.span(), d.apply(w)) + d.apply(interior(a.span(), w));
}

QMap::QMap(std::vector<std::vector<std::vector<FPoly>>> blocks) : q_(std::move(blocks)) {
  const int m = rank();
  if (m < 1) throw DomainError("empty Q map");
  for (const auto& b : q_) {
    require_same_shape(static_cast<int>(b.size()), m, "Q block rows");
    for (const auto& row : b) require_same_shape(static_cast<int>(row.size()), m, "Q block columns");
  }
}

QMap QMap::zero(Ring ring, int m) {
  const auto n = static_cast<std::size_t>(m);
  return QMap(std::vector<std::vector<std::vector<FPoly>>>(
      n, std::vector<std::vector<FPoly>>(n, std::vector<FPoly>(n, FPoly(ring)))));
}

QMap QMap::diagonal(Ring ring, const std::vector<Rational>& scale) {
  QMap q = zero(ring, static_cast<int>(scale.size()));
  for (std::size_t j = 0; j < scale.size(); ++j) q.q_[j][j][j] = FPoly::constant(ring, scale[j]);
  return q;
}

FPoly QMap::recursion(int k, int j) const {
  FPoly n(q(0, 0, 0).ring());
  for (int l = 0; l < rank(); ++l) n += q(j, k, l);
  return n;
}

KForm QMap::transpose_apply(const KForm& theta) const {
  if (theta.degree() != 1) throw DomainError("Q* acts on one-forms");
  require_same_shape(theta.rank(), rank(), "one-form rank");
  KForm r(theta.ring(), rank(), 1);
  for (int j = 0; j < rank(); ++j)
    for (int k = 0; k < rank(); ++k) {
      const FPoly n = recursion(k, j);
      if (!n.is_zero()) r.add(IndexMask{1} << j, n * theta.component(IndexMask{1} << k));
    }
  return r;
}

KForm QMap::connection(int k, int l) const {
  const Ring ring = q(0, 0, 0).ring();
  KForm t(ring, rank(), 1);
  for (int j = 0; j < rank(); ++j) t.add(IndexMask{1} << j, q(j, k, l));
  return t;
}

std::vector<std::pair<std::string, FPoly>> ring_generators(Ring ring) {
  std::vector<std::pair<std::string, FPoly>> g;
  for (int j = 0; j < ring.dim; ++j) {
    const std::string x = "x" + std::to_string(j + 1);
    if (ring.flavor == Flavor::Polynomial) {
      g.emplace_back(x, FPoly::coordinate(ring, j));
    } else {
      std::vector<int> k(static_cast<std::size_t>(ring.dim), 0);
      k[static_cast<std::size_t>(j)] = 1;
      g.emplace_back("e^{i" + x + "}", FPoly::term(ring, k, 0, 1));
      k[static_cast<std::size_t>(j)] = -1;
      g.emplace_back("e^{-i" + x + "}", FPoly::term(ring, k, 0, 1));
    }
  }
  return g;
}

DStar build_dstar(const QMap& q, const FPAlgebroid& e) {
  const int m = e.rank();
  require_same_shape(q.rank(), m, "Q map rank vs algebroid rank");
  std::vector<VecField> x;
  std::vector<KForm> dc;
  for (int j = 0; j < m; ++j) {
    VecField v = VecField::zero(e.ring());
    for (int k = 0; k < m; ++k) {
      const FPoly n = q.recursion(k, j);
      if (!n.is_zero()) v += n * e.anchor(k);
    }
    x.push_back(std::move(v));
  }
  for (int k = 0; k < m; ++k) {
    KForm w = e.zero_form(2);
    for (int l = 0; l < m; ++l) w -= wedge(q.connection(k, l), e.coframe(l));
    dc.push_back(std::move(w));
  }
  DStar out{OddDerivation("d_E*", e.ring(), std::move(x), std::move(dc)), false, "", "", e.zero_form(2)};
  const OddDerivation de = de_differential(e);

  std::vector<std::pair<std::string, KForm>> gens;
  for (auto& [name, f] : ring_generators(e.ring())) gens.emplace_back(name, KForm::function(f, m));
  for (int k = 0; k < m; ++k) gens.emplace_back("e^" + std::to_string(k + 1), e.coframe(k));

  for (const auto& [name, g] : gens) {
    KForm r = out.op(out.op(g));
    if (!r.is_zero()) {
      out.failed_identity = "nilpotency";
      out.generator = name;
      out.residual = std::move(r);
      return out;
    }
  }
  for (const auto& [name, g] : gens) {
    KForm r = de(out.op(g)) + out.op(de(g));
    if (!r.is_zero()) {
      out.failed_identity = "anticommutation";
      out.generator = name;
      out.residual = std::move(r);
      return out;
    }
  }
  out.accepted = true;
  return out;
}

std::vector<std::vector<KForm>> curvature(const QMap& q, const FPAlgebroid& e) {
  const int m = e.rank();
  require_same_shape(q.rank(), m, "Q map rank vs algebroid rank");
  const OddDerivation de = de_differential(e);
  std::vector<std::vector<KForm>> theta(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l) theta[static_cast<std::size_t>(k)].push_back(q.connection(k, l));
  std::vector<std::vector<KForm>> f(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l) {
      KForm fk = de.apply(theta[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)]);
      for (int s = 0; s < m; ++s)
        fk += wedge(theta[static_cast<std::size_t>(k)][static_cast<std::size_t>(s)],
                    theta[static_cast<std::size_t>(s)][static_cast<std::size_t>(l)]);
      f[static_cast<std::size_t>(k)].push_back(std::move(fk));
    }
  return f;
}

bool is_flat(const std::vector<std::vector<KForm>>& f) {
  for (const auto& row : f)
    for (const auto& w : row)
      if (!w.is_zero()) return false;
  return true;
}

}  // namespace cab
