#include <iostream>

#include "CLI11.hpp"

#include "cbqr/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Krotov successive-improvement solver for constrained bilinear "
               "quadratic regulators"};
  app.require_subcommand(1);

  cbqr::RunRequest request;
  CLI::App* solve = app.add_subcommand(
      "solve", "Solve a builtin or config-defined problem and emit artifacts");
  auto* builtin = solve->add_option("--builtin", request.builtin,
                                    "Bundled problem: savs | scalar | lqr-oracle");
  auto* config = solve->add_option("--config", request.config_path,
                                   "Path to a JSON problem config");
  builtin->excludes(config);
  solve->add_option("--out", request.out_dir,
                    "Directory for costs.csv, trajectory.csv, value_t0.csv");
  solve->add_option("--epsilon", request.epsilon,
                    "Stopping tolerance on |J_k - J_{k+1}|");
  solve->add_option("--max-iter", request.max_iterations, "Iteration cap");
  solve->add_option("--steps", request.steps, "Override the time-grid step count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cbqr::kExitInputError;
  }

  return cbqr::run_solve(request, std::cout, std::cerr);
}
