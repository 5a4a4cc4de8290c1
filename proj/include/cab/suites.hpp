#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cab/algebroid.hpp"
#include "cab/courant.hpp"
#include "cab/lenard.hpp"
#include "cab/report.hpp"

namespace cab {

struct SuiteConfig {
  std::uint64_t seed = 1;
  /// Random instances per identity.
  int instances = 100;
  int mode_radius = 2;
};

struct SuiteResult {
  std::string suite;
  std::vector<IdentityReport> identities;
  /// Counters that are reported but not certified (classification tallies, chain length).
  std::map<std::string, std::string> notes;

  bool certified() const;
};

struct NamedAlgebra {
  std::string name;
  FinLieAlg algebra;
  SymplForm omega;
};

/// Jacobi of vf_bracket, the Courant Jacobiator diagnostic, the reduced
/// bracket over certified bivectors and sympl_bracket for each algebra.
SuiteResult courant_suite(const SuiteConfig& cfg, const std::vector<NamedAlgebra>& algebras);

/// Jacobi of sd_bracket and R_bracket (loop splitting), pairing invariance
/// and antisymmetry of lie_poisson and deformed_lie_poisson.
SuiteResult semidirect_suite(const SuiteConfig& cfg);

struct AlgebroidCase {
  FPAlgebroid algebroid;
  std::optional<QMap> q;
};

/// d_E^2 = 0 on random forms; for cases with Q, acceptance of d_E* and
/// zero curvature.
SuiteResult algebroid_suite(const SuiteConfig& cfg, const std::vector<AlgebroidCase>& cases);

/// Builds the hierarchy and records every certificate entry.
SuiteResult lenard_suite(const LenardProblem& problem);

std::vector<NamedAlgebra> default_algebras();
std::vector<AlgebroidCase> default_algebroids();

}  // namespace cab
