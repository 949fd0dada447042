#pragma once

#include <optional>
#include <string>

#include "cbqr/krotov.hpp"
#include "cbqr/model.hpp"

namespace cbqr {

bool operator==(const BilinearDynamics& a, const BilinearDynamics& b);
bool operator==(const QuadraticCost& a, const QuadraticCost& b);
bool operator==(const BilinearProblem& a, const BilinearProblem& b);
bool operator==(const SolveOptions& a, const SolveOptions& b);

struct ParsedConfig {
  BilinearProblem problem;
  SolveOptions options;
};

/// Parses a JSON problem document. Every model invariant is checked here;
/// failures throw ConfigError addressed to the offending field (or byte
/// position for syntax errors). `steps_override` replaces grid.steps.
ParsedConfig parse_config(const std::string& text,
                          std::optional<int> steps_override = std::nullopt);

ParsedConfig parse_config_file(const std::string& path,
                               std::optional<int> steps_override = std::nullopt);

/// Inverse of parse_config: emits a document that parses back to an equal
/// problem and options.
std::string serialize_config(const BilinearProblem& problem,
                             const SolveOptions& options);

}  // namespace cbqr
