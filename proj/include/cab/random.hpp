#pragma once

#include <cstdint>
#include <random>

#include "cab/fields.hpp"

namespace cab {

/// Shape of randomly drawn sparse data.
struct SparseShape {
  int max_terms = 3;
  int mode_radius = 2;
  int loop_lo = 0;
  int loop_hi = 0;
  int num_bound = 3;
  int den_bound = 3;
  bool complex = true;
};

/// Seeded source of sparse random instances for the property suites. Draws
/// are a pure function of the seed and the call sequence.
class InstanceGenerator {
 public:
  explicit InstanceGenerator(std::uint64_t seed) : rng_(seed) {}

  int uniform(int lo, int hi);
  Rational rational(int num_bound, int den_bound);
  Rational nonzero_rational(int num_bound, int den_bound);
  CRat scalar(const SparseShape& s);
  FPoly fpoly(Ring ring, const SparseShape& s);
  VecField field(Ring ring, const SparseShape& s);
  OneForm form(Ring ring, const SparseShape& s);
  EPair epair(Ring ring, const SparseShape& s);
  APair apair(Ring ring, const SparseShape& s);
  KForm kform(Ring ring, int rank, int degree, const SparseShape& s);

 private:
  std::mt19937_64 rng_;
};

}  // namespace cab
