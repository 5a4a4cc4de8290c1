#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cab/algebroid.hpp"
#include "cab/courant.hpp"
#include "cab/loopflow.hpp"

namespace cab::io {

inline constexpr const char* kInputSchema = "cabench.input/1";

/// Raw structure data; identities are checked when the structure is built,
/// so a corrupted definition parses and then fails verification.
struct LieAlgebraInput {
  std::string name;
  int dim = 0;
  std::vector<FinLieAlg::Bracket> brackets;
  std::optional<RatMatrix> omega;
};

using Blocks = std::vector<std::vector<std::vector<FPoly>>>;

struct AlgebroidInput {
  std::string name;
  Ring ring;
  std::vector<VecField> anchor;
  Blocks structure;
  std::optional<Blocks> q;
};

struct LenardInput {
  Section seed;
  KForm omega;
  int cap = 6;
};

struct FlowInput {
  Ring ring;
  Window window;
  std::string casimir = "quadratic";
  int s = 0;
  std::vector<Rational> translation;
  APair point;
  double dt = 1e-3;
  int steps = 100;
  std::vector<int> watch;
  int snapshot_every = 0;
  double leak_tolerance = 0;
  ProjectionPolicy policy = ProjectionPolicy::Hard;
};

struct InputDocument {
  std::string source;
  std::optional<LieAlgebraInput> lie_algebra;
  std::optional<AlgebroidInput> algebroid;
  std::optional<LenardInput> lenard;
  std::optional<FlowInput> flow;
};

/// Throws ParseError as "source:line:col: message (key path)".
InputDocument parse_input(std::string_view text, const std::string& source);
InputDocument load_input(const std::string& path);

}  // namespace cab::io
