#include "cbqr/run.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>

#include "cbqr/bench.hpp"
#include "cbqr/config.hpp"
#include "cbqr/errors.hpp"

namespace cbqr {
namespace {

// 12 significant digits everywhere an artifact number is serialized.
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_costs_csv(const std::string& path, const std::vector<double>& costs) {
  std::ofstream out(path, std::ios::binary);
  out << "k,J,deltaJ\n";
  for (std::size_t k = 0; k < costs.size(); ++k) {
    out << k << "," << num(costs[k]) << ",";
    if (k > 0) {
      out << num(costs[k] - costs[k - 1]);
    }
    out << "\n";
  }
}

void write_trajectory_csv(const std::string& path, const TimeGrid& grid,
                          const Process& process) {
  std::ofstream out(path, std::ios::binary);
  out << "t";
  for (int i = 1; i <= process.x.dim(); ++i) {
    out << ",x" << i;
  }
  for (int i = 1; i <= process.u.dim(); ++i) {
    out << ",u" << i;
  }
  out << "\n";
  for (int j = 0; j < grid.nodes(); ++j) {
    out << num(grid.node(j));
    for (double v : process.x.at(j)) {
      out << "," << num(v);
    }
    for (double v : process.u.at(j)) {
      out << "," << num(v);
    }
    out << "\n";
  }
}

void write_value_csv(const std::string& path, const ValueCoefficients& value) {
  std::ofstream out(path, std::ios::binary);
  const Matrix& p0 = value.P.front();
  out << "name";
  for (int j = 1; j <= p0.cols(); ++j) {
    out << ",c" << j;
  }
  out << "\n";
  for (int i = 0; i < p0.rows(); ++i) {
    out << "P" << (i + 1);
    for (int j = 0; j < p0.cols(); ++j) {
      out << "," << num(p0(i, j));
    }
    out << "\n";
  }
  out << "p";
  for (double v : value.p.front()) {
    out << "," << num(v);
  }
  out << "\n";
}

void print_table(std::ostream& out, const SolveReport& report) {
  out << "  k             J_k        deltaJ_k\n";
  for (std::size_t k = 0; k < report.costs.size(); ++k) {
    char line[96];
    if (k == 0) {
      std::snprintf(line, sizeof(line), "%3zu %15.9g %15s\n", k, report.costs[k], "-");
    } else {
      std::snprintf(line, sizeof(line), "%3zu %15.9g %15.6g\n", k, report.costs[k],
                    report.costs[k] - report.costs[k - 1]);
    }
    out << line;
  }
  out << "termination: " << termination_name(report.termination)
      << " after " << report.iterations_run << " iteration(s)";
  if (report.epsilon_used > 0.0) {
    out << " (epsilon " << num(report.epsilon_used) << ")";
  }
  out << "\n";
}

}  // namespace

int run_solve(const RunRequest& request, std::ostream& out, std::ostream& err) {
  if (request.builtin.empty() == request.config_path.empty()) {
    err << "error: exactly one of --builtin or --config is required\n";
    return kExitInputError;
  }
  if (request.steps && *request.steps < 1) {
    err << "error: --steps must be positive\n";
    return kExitInputError;
  }

  std::optional<BilinearProblem> problem;
  SolveOptions options;
  try {
    if (!request.builtin.empty()) {
      problem = bench::build_builtin(request.builtin, request.steps);
      if (!problem) {
        err << "error: unknown builtin problem '" << request.builtin
            << "' (expected savs | scalar | lqr-oracle)\n";
        return kExitInputError;
      }
      options = default_options(*problem);
    } else {
      ParsedConfig parsed = parse_config_file(request.config_path, request.steps);
      problem.emplace(std::move(parsed.problem));
      options = std::move(parsed.options);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  if (request.epsilon) {
    if (!(*request.epsilon > 0.0)) {
      err << "error: --epsilon must be positive\n";
      return kExitInputError;
    }
    options.epsilon = *request.epsilon;
  }
  if (request.max_iterations) {
    if (*request.max_iterations < 1) {
      err << "error: --max-iter must be positive\n";
      return kExitInputError;
    }
    options.max_iterations = *request.max_iterations;
  }

  std::error_code ec;
  if (!request.out_dir.empty()) {
    std::filesystem::create_directories(request.out_dir, ec);
    if (ec) {
      err << "error: cannot create output directory '" << request.out_dir
          << "': " << ec.message() << "\n";
      return kExitInputError;
    }
  }

  const SolveReport report = solve(*problem, options);
  print_table(out, report);

  if (!request.out_dir.empty()) {
    const std::filesystem::path dir(request.out_dir);
    write_costs_csv((dir / "costs.csv").string(), report.costs);
    if (report.final_process) {
      write_trajectory_csv((dir / "trajectory.csv").string(), problem->grid,
                           *report.final_process);
    }
    if (report.final_value) {
      write_value_csv((dir / "value_t0.csv").string(), *report.final_value);
    }
  }

  switch (report.termination) {
    case Termination::kConverged:
      return kExitConverged;
    case Termination::kMaxIterations:
    case Termination::kCostIncreased:
      return kExitNotConverged;
    case Termination::kDiverged:
      return kExitDiverged;
  }
  return kExitInputError;
}

}  // namespace cbqr
