#pragma once

#include <string>

namespace cab {

/// Outcome of checking one identity over a batch of instances.
struct IdentityReport {
  std::string identity;
  int instances = 0;
  int failures = 0;
  /// Text rendering of the first nonzero residual, empty when none.
  std::string witness;

  bool certified() const { return instances > 0 && failures == 0; }
  void record(bool ok, const std::string& residual_text) {
    ++instances;
    if (ok) return;
    if (failures++ == 0) witness = residual_text;
  }
};

/// Cyclic sum br(u, br(v, w)) + br(v, br(w, u)) + br(w, br(u, v)).
template <class T, class Br>
T cyclic_sum(const Br& br, const T& u, const T& v, const T& w) {
  return br(u, br(v, w)) + br(v, br(w, u)) + br(w, br(u, v));
}

}  // namespace cab
