#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "cbqr/krotov.hpp"

namespace cbqr {

struct RunRequest {
  std::string builtin;      // one of the bundled problem names, or
  std::string config_path;  // a config document path (exactly one of the two)
  std::string out_dir;      // artifact directory; empty = table only
  std::optional<double> epsilon;
  std::optional<int> max_iterations;
  std::optional<int> steps;
};

// Exit contract: 0 converged, 1 input error, 2 stopped without convergence
// (iteration cap or beyond-noise cost increase), 3 integration divergence.
inline constexpr int kExitConverged = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitNotConverged = 2;
inline constexpr int kExitDiverged = 3;

/// Resolves the problem, runs the solver, prints the iteration table to
/// `out`, writes costs.csv / trajectory.csv / value_t0.csv under out_dir
/// (when given), and maps the termination to the exit contract. Input
/// problems are reported on `err`.
int run_solve(const RunRequest& request, std::ostream& out, std::ostream& err);

}  // namespace cbqr
