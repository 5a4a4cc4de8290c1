#include "cab/random.hpp"

#include <bit>

namespace cab {

int InstanceGenerator::uniform(int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng_);
}

Rational InstanceGenerator::rational(int num_bound, int den_bound) {
  Rational q(uniform(-num_bound, num_bound), uniform(1, den_bound));
  q.canonicalize();
  return q;
}

Rational InstanceGenerator::nonzero_rational(int num_bound, int den_bound) {
  Rational q;
  do q = rational(num_bound, den_bound);
  while (sgn(q) == 0);
  return q;
}

CRat InstanceGenerator::scalar(const SparseShape& s) {
  Rational re = nonzero_rational(s.num_bound, s.den_bound);
  Rational im = s.complex ? rational(s.num_bound, s.den_bound) : Rational(0);
  return {re, im};
}

FPoly InstanceGenerator::fpoly(Ring ring, const SparseShape& s) {
  FPoly f(ring);
  const int terms = uniform(0, s.max_terms);
  for (int t = 0; t < terms; ++t) {
    MultiIndex idx;
    for (int j = 0; j < ring.dim; ++j)
      idx.torus[j] = ring.flavor == Flavor::Fourier ? uniform(-s.mode_radius, s.mode_radius)
                                                    : uniform(0, s.mode_radius);
    idx.loop = uniform(s.loop_lo, s.loop_hi);
    f.add(idx, scalar(s));
  }
  return f;
}

VecField InstanceGenerator::field(Ring ring, const SparseShape& s) {
  VecField a = VecField::zero(ring);
  for (int j = 0; j < ring.dim; ++j) a[j] = fpoly(ring, s);
  return a;
}

OneForm InstanceGenerator::form(Ring ring, const SparseShape& s) {
  OneForm a = OneForm::zero(ring);
  for (int j = 0; j < ring.dim; ++j) a[j] = fpoly(ring, s);
  return a;
}

EPair InstanceGenerator::epair(Ring ring, const SparseShape& s) {
  OneForm f = form(ring, s);
  VecField v = field(ring, s);
  return {std::move(f), std::move(v)};
}

APair InstanceGenerator::apair(Ring ring, const SparseShape& s) {
  VecField v = field(ring, s);
  OneForm f = form(ring, s);
  return {std::move(v), std::move(f)};
}

KForm InstanceGenerator::kform(Ring ring, int rank, int degree, const SparseShape& s) {
  KForm w(ring, rank, degree);
  for (IndexMask m = 0; m < (IndexMask{1} << rank); ++m)
    if (std::popcount(m) == degree) w.add(m, fpoly(ring, s));
  return w;
}

}  // namespace cab
