#include "cab/fields.hpp"

#include <algorithm>
#include <bit>

#include "cab/error.hpp"

namespace cab {

void require_same_shape(int a, int b, const char* what) {
  if (a != b)
    throw DimensionMismatch(std::string(what) + " mismatch: " + std::to_string(a) + " vs " +
                            std::to_string(b));
}

std::vector<int> mask_indices(IndexMask mask) {
  std::vector<int> out;
  for (int j = 0; mask != 0; ++j, mask >>= 1)
    if (mask & 1U) out.push_back(j);
  return out;
}

IndexMask indices_mask(std::span<const int> sorted_indices) {
  IndexMask m = 0;
  for (int j : sorted_indices) m |= IndexMask{1} << j;
  return m;
}

int wedge_sign(IndexMask a, IndexMask b) {
  if (a & b) return 0;
  // Count pairs (i in a, j in b) with i > j: each is one transposition.
  int swaps = 0;
  for (IndexMask rest = b; rest != 0; rest &= rest - 1) {
    const int j = std::countr_zero(rest);
    const IndexMask above = j + 1 >= 32 ? 0 : (~IndexMask{0} << (j + 1));
    swaps += std::popcount(a & above);
  }
  return (swaps % 2 == 0) ? 1 : -1;
}

KForm::KForm(Ring ring, int rank, int degree) : ring_(ring), rank_(rank), degree_(degree) {
  if (rank < 0 || rank > 31) throw DomainError("form rank out of range");
  if (degree < 0) throw DomainError("negative form degree");
}

KForm KForm::function(const FPoly& f, int rank) {
  KForm w(f.ring(), rank, 0);
  w.add(0, f);
  return w;
}

KForm KForm::from_one_form(const OneForm& alpha) {
  KForm w(alpha.ring(), alpha.size(), 1);
  for (int j = 0; j < alpha.size(); ++j) w.add(IndexMask{1} << j, alpha[j]);
  return w;
}

KForm KForm::basis(Ring ring, int rank, std::vector<int> indices) {
  KForm w(ring, rank, static_cast<int>(indices.size()));
  int sign = 1;
  // Bubble sort, tracking the permutation parity.
  for (std::size_t i = 0; i < indices.size(); ++i)
    for (std::size_t j = 0; j + 1 < indices.size() - i; ++j)
      if (indices[j] > indices[j + 1]) {
        std::swap(indices[j], indices[j + 1]);
        sign = -sign;
      }
  if (std::adjacent_find(indices.begin(), indices.end()) != indices.end()) return w;
  for (int j : indices)
    if (j < 0 || j >= rank) throw DomainError("generator index out of range");
  w.add(indices_mask(indices), FPoly::constant(ring, CRat(sign)));
  return w;
}

FPoly KForm::component(IndexMask mask) const {
  auto it = comps_.find(mask);
  return it == comps_.end() ? FPoly(ring_) : it->second;
}

FPoly KForm::component(std::vector<int> indices) const {
  int sign = 1;
  for (std::size_t i = 0; i < indices.size(); ++i)
    for (std::size_t j = 0; j + 1 < indices.size() - i; ++j)
      if (indices[j] > indices[j + 1]) {
        std::swap(indices[j], indices[j + 1]);
        sign = -sign;
      }
  if (std::adjacent_find(indices.begin(), indices.end()) != indices.end()) return FPoly(ring_);
  FPoly c = component(indices_mask(indices));
  return sign == 1 ? c : -c;
}

FPoly KForm::as_function() const {
  if (degree_ != 0) throw DomainError("not a 0-form");
  return component(IndexMask{0});
}

OneForm KForm::as_one_form() const {
  if (degree_ != 1) throw DomainError("not a 1-form");
  OneForm a = OneForm::zero(ring_, rank_);
  for (const auto& [m, c] : comps_) a[std::countr_zero(m)] = c;
  return a;
}

void KForm::add(IndexMask mask, const FPoly& coeff) {
  if (coeff.is_zero()) return;
  if (coeff.ring() != ring_) throw DimensionMismatch("form coefficient ring mismatch");
  if (std::popcount(mask) != degree_) throw DomainError("component index has wrong degree");
  if (rank_ < 32 && (mask >> rank_) != 0) throw DomainError("component index beyond rank");
  auto [it, inserted] = comps_.try_emplace(mask, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) comps_.erase(it);
  }
}

void KForm::check_compatible(const KForm& o) const {
  if (ring_ != o.ring_) throw DimensionMismatch("form ring mismatch");
  require_same_shape(rank_, o.rank_, "form rank");
  require_same_shape(degree_, o.degree_, "form degree");
}

KForm& KForm::operator+=(const KForm& o) {
  check_compatible(o);
  for (const auto& [m, c] : o.comps_) add(m, c);
  return *this;
}

KForm& KForm::operator-=(const KForm& o) {
  check_compatible(o);
  for (const auto& [m, c] : o.comps_) add(m, -c);
  return *this;
}

KForm KForm::operator-() const {
  KForm r = *this;
  for (auto& [m, c] : r.comps_) c = -c;
  return r;
}

KForm operator*(const FPoly& f, const KForm& w) {
  KForm r(w.ring_, w.rank_, w.degree_);
  for (const auto& [m, c] : w.comps_) r.add(m, f * c);
  return r;
}

KForm operator*(const CRat& s, const KForm& w) {
  KForm r(w.ring_, w.rank_, w.degree_);
  for (const auto& [m, c] : w.comps_) r.add(m, s * c);
  return r;
}

std::string to_string(const KForm& w) {
  if (w.is_zero()) return "0";
  std::string out;
  for (const auto& [m, c] : w.components()) {
    if (!out.empty()) out += " + ";
    out += "(" + to_string(c) + ")";
    if (m == 0) continue;
    out += "*";
    bool first = true;
    for (int j : mask_indices(m)) {
      out += (first ? "e" : "^e") + std::to_string(j + 1);
      first = false;
    }
  }
  return out;
}

KForm wedge(const KForm& a, const KForm& b) {
  if (a.ring() != b.ring()) throw DimensionMismatch("form ring mismatch");
  require_same_shape(a.rank(), b.rank(), "form rank");
  KForm r(a.ring(), a.rank(), a.degree() + b.degree());
  for (const auto& [ma, ca] : a.components())
    for (const auto& [mb, cb] : b.components()) {
      const int s = wedge_sign(ma, mb);
      if (s == 0) continue;
      FPoly prod = ca * cb;
      r.add(ma | mb, s == 1 ? prod : -prod);
    }
  return r;
}

KForm interior(std::span<const FPoly> v, const KForm& w) {
  if (w.degree() == 0) throw DomainError("interior product of a 0-form");
  require_same_shape(static_cast<int>(v.size()), w.rank(), "interior rank");
  KForm r(w.ring(), w.rank(), w.degree() - 1);
  for (const auto& [m, c] : w.components()) {
    int pos = 0;
    for (IndexMask rest = m; rest != 0; rest &= rest - 1, ++pos) {
      const int j = std::countr_zero(rest);
      if (v[static_cast<std::size_t>(j)].is_zero()) continue;
      FPoly term = v[static_cast<std::size_t>(j)] * c;
      r.add(m & ~(IndexMask{1} << j), pos % 2 == 0 ? term : -term);
    }
  }
  return r;
}

KForm interior(const VecField& v, const KForm& w) { return interior(v.span(), w); }

KForm ext_d(const KForm& w) {
  require_same_shape(w.rank(), w.ring().dim, "exterior derivative rank vs dimension");
  KForm r(w.ring(), w.rank(), w.degree() + 1);
  if (w.degree() >= w.rank()) return r;
  for (const auto& [m, c] : w.components())
    for (int j = 0; j < w.rank(); ++j) {
      const IndexMask bit = IndexMask{1} << j;
      if (m & bit) continue;
      FPoly dc = partial(c, j);
      if (dc.is_zero()) continue;
      const int s = wedge_sign(bit, m);
      r.add(m | bit, s == 1 ? dc : -dc);
    }
  return r;
}

KForm lie_derivative(const VecField& a, const KForm& w) {
  require_same_shape(a.size(), w.rank(), "Lie derivative rank");
  if (w.degree() == 0) return KForm::function(apply(a, w.as_function()), w.rank());
  KForm r = interior(a, ext_d(w));
  r += ext_d(interior(a, w));
  return r;
}

OneForm lie_derivative(const VecField& a, const OneForm& alpha) {
  require_same_shape(a.size(), alpha.size(), "Lie derivative dimension");
  const int n = a.size();
  OneForm r = OneForm::zero(alpha.ring(), n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      r[j] += a[k] * partial(alpha[j], k);
      r[j] += alpha[k] * partial(a[k], j);
    }
  return r;
}

FPoly apply(const VecField& a, const FPoly& f) {
  require_same_shape(a.size(), f.dim(), "vector field dimension");
  FPoly r(f.ring());
  for (int k = 0; k < a.size(); ++k)
    if (!a[k].is_zero()) r += a[k] * partial(f, k);
  return r;
}

OneForm gradient(const FPoly& f) {
  OneForm g = OneForm::zero(f.ring());
  for (int j = 0; j < f.dim(); ++j) g[j] = partial(f, j);
  return g;
}

FPoly divergence(const VecField& a) {
  FPoly r(a.ring());
  for (int k = 0; k < a.size(); ++k) r += partial(a[k], k);
  return r;
}

FPoly contract(const OneForm& alpha, const VecField& a) {
  require_same_shape(alpha.size(), a.size(), "pairing dimension");
  FPoly r(a.ring());
  for (int j = 0; j < a.size(); ++j) r += alpha[j] * a[j];
  return r;
}

VecField vf_bracket(const VecField& a, const VecField& b) {
  require_same_shape(a.size(), b.size(), "vector field dimension");
  VecField r = VecField::zero(a.ring(), a.size());
  for (int j = 0; j < a.size(); ++j) r[j] = apply(a, b[j]) - apply(b, a[j]);
  return r;
}

OneForm coad(const VecField& a, const OneForm& alpha) {
  require_same_shape(a.size(), alpha.size(), "coadjoint dimension");
  OneForm r = lie_derivative(a, alpha);
  r += divergence(a) * alpha;
  return -r;
}

EPair operator+(const EPair& u, const EPair& v) { return {u.form + v.form, u.field + v.field}; }
EPair operator-(const EPair& u, const EPair& v) { return {u.form - v.form, u.field - v.field}; }
EPair operator*(const CRat& c, const EPair& u) { return {c * u.form, c * u.field}; }
APair operator+(const APair& u, const APair& v) { return {u.field + v.field, u.form + v.form}; }
APair operator-(const APair& u, const APair& v) { return {u.field - v.field, u.form - v.form}; }
APair operator*(const CRat& c, const APair& u) { return {c * u.field, c * u.form}; }
APair operator*(const FPoly& f, const APair& u) { return {f * u.field, f * u.form}; }

Preimage de_rham_preimage(const KForm& omega) {
  if (omega.degree() == 0) throw DomainError("a 0-form has no exterior preimage");
  require_same_shape(omega.rank(), omega.ring().dim, "preimage rank vs dimension");
  const Ring ring = omega.ring();
  KForm potential(ring, omega.rank(), omega.degree() - 1);
  KForm obstruction(ring, omega.rank(), omega.degree());

  for (const auto& [m, c] : omega.components()) {
    for (const auto& [idx, coef] : c.terms()) {
      if (ring.flavor == Flavor::Fourier) {
        if (idx.torus_zero()) {
          FPoly t(ring);
          t.add(idx, coef);
          obstruction.add(m, t);
          continue;
        }
        long k2 = 0;
        for (int j = 0; j < ring.dim; ++j) k2 += long{idx.torus[j]} * idx.torus[j];
        // -i / |k|^2
        const CRat scale(Rational(0), Rational(-1, k2));
        int pos = 0;
        for (IndexMask rest = m; rest != 0; rest &= rest - 1, ++pos) {
          const int j = std::countr_zero(rest);
          if (idx.torus[j] == 0) continue;
          FPoly t(ring);
          const CRat v = coef * scale * CRat(pos % 2 == 0 ? idx.torus[j] : -idx.torus[j]);
          t.add(idx, v);
          potential.add(m & ~(IndexMask{1} << j), t);
        }
      } else {
        int total = omega.degree();
        for (int j = 0; j < ring.dim; ++j) total += idx.torus[j];
        const CRat scale(Rational(1, total));
        int pos = 0;
        for (IndexMask rest = m; rest != 0; rest &= rest - 1, ++pos) {
          const int j = std::countr_zero(rest);
          MultiIndex raised = idx;
          raised.torus[j] += 1;
          FPoly t(ring);
          t.add(raised, pos % 2 == 0 ? coef * scale : -(coef * scale));
          potential.add(m & ~(IndexMask{1} << j), t);
        }
      }
    }
  }
  KForm defect = omega - ext_d(potential) - obstruction;
  return {std::move(potential), std::move(obstruction), std::move(defect)};
}

}  // namespace cab
