#include "cab/fpoly.hpp"

#include <cstdlib>
#include <ostream>
#include <sstream>

#include "cab/error.hpp"

namespace cab {

bool MultiIndex::torus_zero() const {
  for (int k : torus)
    if (k != 0) return false;
  return true;
}

FPoly::FPoly(Ring ring) : ring_(ring) {
  if (ring.dim < 0 || ring.dim > kMaxDim)
    throw DomainError("ring dimension " + std::to_string(ring.dim) + " outside [0, " +
                      std::to_string(kMaxDim) + "]");
}

FPoly FPoly::constant(Ring ring, const CRat& c) {
  FPoly f(ring);
  f.add(MultiIndex{}, c);
  return f;
}

FPoly FPoly::term(Ring ring, const std::vector<int>& modes, int loop, const CRat& c) {
  if (static_cast<int>(modes.size()) != ring.dim)
    throw DimensionMismatch("mode vector of length " + std::to_string(modes.size()) +
                            " in a ring of dimension " + std::to_string(ring.dim));
  MultiIndex idx;
  for (int j = 0; j < ring.dim; ++j) idx.torus[j] = modes[j];
  idx.loop = loop;
  FPoly f(ring);
  f.add(idx, c);
  return f;
}

FPoly FPoly::coordinate(Ring ring, int axis) {
  if (axis < 0 || axis >= ring.dim) throw DomainError("coordinate axis out of range");
  MultiIndex idx;
  idx.torus[axis] = 1;
  FPoly f(ring);
  f.add(idx, CRat(1));
  return f;
}

FPoly FPoly::lambda(Ring ring, int k) {
  MultiIndex idx;
  idx.loop = k;
  FPoly f(ring);
  f.add(idx, CRat(1));
  return f;
}

bool FPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == MultiIndex{});
}

bool FPoly::is_x_independent() const {
  for (const auto& [idx, c] : terms_)
    if (!idx.torus_zero()) return false;
  return true;
}

CRat FPoly::coeff(const MultiIndex& idx) const {
  auto it = terms_.find(idx);
  return it == terms_.end() ? CRat() : it->second;
}

void FPoly::check_index(const MultiIndex& idx) const {
  for (int j = ring_.dim; j < kMaxDim; ++j)
    if (idx.torus[j] != 0) throw DimensionMismatch("mode index beyond ring dimension");
  if (ring_.flavor == Flavor::Polynomial)
    for (int j = 0; j < ring_.dim; ++j)
      if (idx.torus[j] < 0) throw DomainError("negative exponent in a polynomial chart");
}

void FPoly::add(const MultiIndex& idx, const CRat& c) {
  if (c.is_zero()) return;
  check_index(idx);
  auto [it, inserted] = terms_.try_emplace(idx, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void require_same_ring(const FPoly& a, const FPoly& b) {
  if (a.ring() != b.ring())
    throw DimensionMismatch("FPoly ring mismatch (dim " + std::to_string(a.dim()) + " vs " +
                            std::to_string(b.dim()) + ")");
}

FPoly& FPoly::operator+=(const FPoly& o) {
  require_same_ring(*this, o);
  for (const auto& [idx, c] : o.terms_) add(idx, c);
  return *this;
}

FPoly& FPoly::operator-=(const FPoly& o) {
  require_same_ring(*this, o);
  for (const auto& [idx, c] : o.terms_) add(idx, -c);
  return *this;
}

FPoly& FPoly::operator*=(const CRat& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [idx, v] : terms_) v *= c;
  return *this;
}

FPoly FPoly::operator-() const {
  FPoly r = *this;
  for (auto& [idx, v] : r.terms_) v = -v;
  return r;
}

FPoly operator*(const FPoly& a, const FPoly& b) {
  require_same_ring(a, b);
  FPoly r(a.ring());
  for (const auto& [ia, ca] : a.terms()) {
    for (const auto& [ib, cb] : b.terms()) {
      MultiIndex idx;
      for (int j = 0; j < kMaxDim; ++j) idx.torus[j] = ia.torus[j] + ib.torus[j];
      idx.loop = ia.loop + ib.loop;
      r.add(idx, ca * cb);
    }
  }
  return r;
}

FPoly partial(const FPoly& f, int axis) {
  if (axis < 0 || axis >= f.dim())
    throw DomainError("axis " + std::to_string(axis) + " out of range for dimension " +
                      std::to_string(f.dim()));
  FPoly r(f.ring());
  for (const auto& [idx, c] : f.terms()) {
    const int k = idx.torus[axis];
    if (k == 0) continue;
    if (f.flavor() == Flavor::Fourier) {
      r.add(idx, c * CRat(Rational(0), Rational(k)));
    } else {
      MultiIndex lowered = idx;
      lowered.torus[axis] -= 1;
      r.add(lowered, c * CRat(k));
    }
  }
  return r;
}

FPoly mean(const FPoly& f) {
  FPoly r(f.ring());
  for (const auto& [idx, c] : f.terms())
    if (idx.torus_zero()) r.add(idx, c);
  return r;
}

FPoly loop_slice(const FPoly& f, int m) {
  FPoly r(f.ring());
  for (const auto& [idx, c] : f.terms()) {
    if (idx.loop != m) continue;
    MultiIndex moved = idx;
    moved.loop = 0;
    r.add(moved, c);
  }
  return r;
}

FPoly residue(const FPoly& f) { return loop_slice(f, -1); }

FPoly shift_loop(const FPoly& f, int k) {
  FPoly r(f.ring());
  for (const auto& [idx, c] : f.terms()) {
    MultiIndex moved = idx;
    moved.loop += k;
    r.add(moved, c);
  }
  return r;
}

FPoly conjugate(const FPoly& f) {
  FPoly r(f.ring());
  for (const auto& [idx, c] : f.terms()) {
    MultiIndex m = idx;
    if (f.flavor() == Flavor::Fourier)
      for (int j = 0; j < f.dim(); ++j) m.torus[j] = -m.torus[j];
    r.add(m, c.conj());
  }
  return r;
}

Rational norm2(const FPoly& f) {
  Rational s = 0;
  for (const auto& [idx, c] : f.terms()) s += c.norm2();
  return s;
}

FPoly restrict_window(const FPoly& f, int radius, int lo, int hi) {
  FPoly r(f.ring());
  for (const auto& [idx, c] : f.terms()) {
    if (idx.loop < lo || idx.loop > hi) continue;
    bool inside = true;
    for (int j = 0; j < f.dim(); ++j)
      if (std::abs(idx.torus[j]) > radius) inside = false;
    if (inside) r.add(idx, c);
  }
  return r;
}

namespace {

std::string monomial_text(const FPoly& f, const MultiIndex& idx) {
  std::ostringstream os;
  bool any = false;
  auto sep = [&] {
    if (any) os << '*';
    any = true;
  };
  if (f.flavor() == Flavor::Polynomial) {
    for (int j = 0; j < f.dim(); ++j) {
      if (idx.torus[j] == 0) continue;
      sep();
      os << 'x' << (j + 1);
      if (idx.torus[j] != 1) os << '^' << idx.torus[j];
    }
  } else if (!idx.torus_zero()) {
    sep();
    os << "e^{i(";
    bool first = true;
    for (int j = 0; j < f.dim(); ++j) {
      const int k = idx.torus[j];
      if (k == 0) continue;
      if (!first || k < 0) os << (k < 0 ? "-" : "+");
      if (std::abs(k) != 1) os << std::abs(k);
      os << 'x' << (j + 1);
      first = false;
    }
    os << ")}";
  }
  if (idx.loop != 0) {
    sep();
    os << "lam";
    if (idx.loop != 1) os << '^' << idx.loop;
  }
  return os.str();
}

}  // namespace

std::string to_string(const FPoly& f) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [idx, c] : f.terms()) {
    if (!first) os << " + ";
    first = false;
    const std::string mono = monomial_text(f, idx);
    if (mono.empty()) {
      os << to_string(c);
    } else if (c == CRat(1)) {
      os << mono;
    } else {
      os << to_string(c) << '*' << mono;
    }
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const FPoly& f) { return os << to_string(f); }

}  // namespace cab
