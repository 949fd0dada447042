#include "cbqr/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "cbqr/errors.hpp"

namespace cbqr {

using nlohmann::json;

bool operator==(const BilinearDynamics& a, const BilinearDynamics& b) {
  return a.n == b.n && a.nu == b.nu && a.A == b.A && a.B == b.B && a.Ns == b.Ns &&
         a.g == b.g && a.x0 == b.x0;
}

bool operator==(const QuadraticCost& a, const QuadraticCost& b) {
  return a.Q == b.Q && a.R == b.R && a.H == b.H;
}

bool operator==(const BilinearProblem& a, const BilinearProblem& b) {
  return a.dynamics == b.dynamics && a.cost == b.cost && a.set == b.set &&
         a.grid == b.grid;
}

bool operator==(const SolveOptions& a, const SolveOptions& b) {
  return a.epsilon == b.epsilon && a.max_iterations == b.max_iterations &&
         a.initial_control == b.initial_control;
}

namespace {

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) {
    throw ConfigError(path.empty() ? "<document>" : path, "expected an object");
  }
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ConfigError(path.empty() ? key : path + "." + key, "missing field");
  }
  return *it;
}

double number_at(const json& v, const std::string& path) {
  if (!v.is_number()) {
    throw ConfigError(path, "expected a number");
  }
  const double d = v.get<double>();
  if (!std::isfinite(d)) {
    throw ConfigError(path, "value not finite");
  }
  return d;
}

int int_at(const json& v, const std::string& path) {
  if (!v.is_number_integer()) {
    throw ConfigError(path, "expected an integer");
  }
  return v.get<int>();
}

Vector vector_at(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) {
    throw ConfigError(path, "expected a nonempty array of numbers");
  }
  Vector out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(number_at(v[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

// Matrix literal: nested rows [[..], ..]; a flat array is an n x 1 column.
Matrix matrix_at(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) {
    throw ConfigError(path, "expected a matrix (array of rows) or vector");
  }
  if (!v.front().is_array()) {
    const Vector col = vector_at(v, path);
    Matrix m(static_cast<int>(col.size()), 1);
    for (std::size_t i = 0; i < col.size(); ++i) {
      m(static_cast<int>(i), 0) = col[i];
    }
    return m;
  }
  const int rows = static_cast<int>(v.size());
  const int cols = static_cast<int>(v.front().size());
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const json& row = v[static_cast<std::size_t>(i)];
    const std::string row_path = path + "[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      throw ConfigError(row_path, "ragged matrix rows");
    }
    for (int j = 0; j < cols; ++j) {
      m(i, j) = number_at(row[static_cast<std::size_t>(j)],
                          row_path + "[" + std::to_string(j) + "]");
    }
  }
  return m;
}

CoefficientProvider provider_at(const json& v, const std::string& path) {
  if (!v.is_object()) {
    throw ConfigError(path, "expected a coefficient object");
  }
  if (v.contains("constant")) {
    return CoefficientProvider::constant(matrix_at(v["constant"], path + ".constant"));
  }
  if (v.contains("sinusoid")) {
    const json& s = v["sinusoid"];
    Matrix amp = matrix_at(require(s, "amplitude", path + ".sinusoid"),
                           path + ".sinusoid.amplitude");
    const double omega =
        number_at(require(s, "omega", path + ".sinusoid"), path + ".sinusoid.omega");
    const double phase =
        s.contains("phase") ? number_at(s["phase"], path + ".sinusoid.phase") : 0.0;
    return CoefficientProvider::sinusoid(std::move(amp), omega, phase);
  }
  if (v.contains("sum")) {
    const json& terms = v["sum"];
    if (!terms.is_array() || terms.empty()) {
      throw ConfigError(path + ".sum", "expected a nonempty array of coefficients");
    }
    std::vector<CoefficientProvider> parts;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      parts.push_back(
          provider_at(terms[i], path + ".sum[" + std::to_string(i) + "]"));
    }
    return CoefficientProvider::sum(std::move(parts));
  }
  throw ConfigError(path, "coefficient must be one of constant | sinusoid | sum");
}

void check_provider_shape(const CoefficientProvider& p, int rows, int cols,
                          const std::string& path) {
  if (p.rows() != rows || p.cols() != cols) {
    throw ConfigError(path, "expected shape " + std::to_string(rows) + "x" +
                                std::to_string(cols) + ", got " +
                                std::to_string(p.rows()) + "x" +
                                std::to_string(p.cols()));
  }
}

AdmissibleSet set_at(const json& v, int nu, const std::string& path) {
  const std::string kind = require(v, "kind", path).get<std::string>();
  try {
    if (kind == "unconstrained") {
      return AdmissibleSet::unconstrained(nu);
    }
    if (kind == "finite_set") {
      const json& pts = require(v, "points", path);
      if (!pts.is_array() || pts.empty()) {
        throw ConfigError(path + ".points", "expected a nonempty array of points");
      }
      std::vector<Vector> points;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        points.push_back(vector_at(pts[i], path + ".points[" + std::to_string(i) + "]"));
      }
      return AdmissibleSet::finite_set(std::move(points));
    }
    if (kind == "box") {
      return AdmissibleSet::box(vector_at(require(v, "lo", path), path + ".lo"),
                                vector_at(require(v, "hi", path), path + ".hi"));
    }
  } catch (const DimensionError& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(path + ".kind",
                    "must be one of unconstrained | finite_set | box");
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) {
      row.push_back(m(i, j));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

json column_to_json(const Matrix& m) {
  json out = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    out.push_back(m(i, 0));
  }
  return out;
}

// Layout: objects one key per line, numeric arrays (and rows of nested
// arrays) on a single line. Numbers go through nlohmann's dump so the
// shortest round-trip-safe representation is kept.
bool is_numeric_array(const json& v) {
  if (!v.is_array()) {
    return false;
  }
  for (const auto& e : v) {
    if (!e.is_number()) {
      return false;
    }
  }
  return true;
}

void pretty_print(const json& v, std::string& out, int depth) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  const std::string pad_in(static_cast<std::size_t>(depth + 1) * 2, ' ');
  if (v.is_object()) {
    out += "{\n";
    std::size_t i = 0;
    for (auto it = v.begin(); it != v.end(); ++it, ++i) {
      out += pad_in + json(it.key()).dump() + ": ";
      pretty_print(it.value(), out, depth + 1);
      if (i + 1 < v.size()) {
        out += ",";
      }
      out += "\n";
    }
    out += pad + "}";
    return;
  }
  if (v.is_array() && !is_numeric_array(v)) {
    out += "[\n";
    for (std::size_t i = 0; i < v.size(); ++i) {
      out += pad_in;
      pretty_print(v[i], out, depth + 1);
      if (i + 1 < v.size()) {
        out += ",";
      }
      out += "\n";
    }
    out += pad + "]";
    return;
  }
  out += v.dump();  // scalars and flat numeric arrays
}

json provider_to_json(const CoefficientProvider& p) {
  const bool column = p.cols() == 1 && p.rows() > 1;
  auto literal = [column](const Matrix& m) {
    return column ? column_to_json(m) : matrix_to_json(m);
  };
  switch (p.kind()) {
    case CoefficientProvider::Kind::kConstant:
      return json{{"constant", literal(p.amplitude())}};
    case CoefficientProvider::Kind::kSinusoid: {
      json s{{"amplitude", literal(p.amplitude())}, {"omega", p.omega()}};
      if (p.phase() != 0.0) {
        s["phase"] = p.phase();
      }
      return json{{"sinusoid", std::move(s)}};
    }
    case CoefficientProvider::Kind::kSum: {
      json terms = json::array();
      for (const auto& t : p.terms()) {
        terms.push_back(provider_to_json(t));
      }
      return json{{"sum", std::move(terms)}};
    }
  }
  return json();
}

}  // namespace

ParsedConfig parse_config(const std::string& text, std::optional<int> steps_override) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", e.what());
  }

  const int n = int_at(require(root, "n", ""), "n");
  const int nu = int_at(require(root, "nu", ""), "nu");
  if (n < 1 || nu < 1) {
    throw ConfigError("n", "dimensions must be positive");
  }

  const json& dyn = require(root, "dynamics", "");
  CoefficientProvider a = provider_at(require(dyn, "A", "dynamics"), "dynamics.A");
  check_provider_shape(a, n, n, "dynamics.A");
  CoefficientProvider b = provider_at(require(dyn, "B", "dynamics"), "dynamics.B");
  check_provider_shape(b, n, nu, "dynamics.B");
  const json& ns_json = require(dyn, "N", "dynamics");
  if (!ns_json.is_array() || static_cast<int>(ns_json.size()) != nu) {
    throw ConfigError("dynamics.N", "expected one N_i per control channel");
  }
  std::vector<CoefficientProvider> ns;
  for (std::size_t i = 0; i < ns_json.size(); ++i) {
    const std::string path = "dynamics.N[" + std::to_string(i) + "]";
    ns.push_back(provider_at(ns_json[i], path));
    check_provider_shape(ns.back(), n, n, path);
  }
  CoefficientProvider g = provider_at(require(dyn, "g", "dynamics"), "dynamics.g");
  check_provider_shape(g, n, 1, "dynamics.g");
  Vector x0 = vector_at(require(dyn, "x0", "dynamics"), "dynamics.x0");
  if (static_cast<int>(x0.size()) != n) {
    throw ConfigError("dynamics.x0", "expected an n-vector");
  }

  const json& cost_json = require(root, "cost", "");
  CoefficientProvider q = provider_at(require(cost_json, "Q", "cost"), "cost.Q");
  check_provider_shape(q, n, n, "cost.Q");
  CoefficientProvider r = provider_at(require(cost_json, "R", "cost"), "cost.R");
  check_provider_shape(r, nu, nu, "cost.R");
  Matrix h = matrix_at(require(cost_json, "H", "cost"), "cost.H");
  if (h.rows() != n || h.cols() != n) {
    throw ConfigError("cost.H", "expected an n x n matrix");
  }

  AdmissibleSet set = set_at(require(root, "admissible", ""), nu, "admissible");
  if (set.dim() != nu) {
    throw ConfigError("admissible", "set dimension does not match nu");
  }

  const json& grid_json = require(root, "grid", "");
  const double t0 = number_at(require(grid_json, "t0", "grid"), "grid.t0");
  const double tf = number_at(require(grid_json, "tf", "grid"), "grid.tf");
  int steps = int_at(require(grid_json, "steps", "grid"), "grid.steps");
  if (steps_override) {
    steps = *steps_override;
  }

  SolveOptions options;
  if (root.contains("solver")) {
    const json& s = root["solver"];
    if (s.contains("epsilon")) {
      options.epsilon = number_at(s["epsilon"], "solver.epsilon");
      if (!(*options.epsilon > 0.0)) {
        throw ConfigError("solver.epsilon", "must be positive");
      }
    }
    if (s.contains("max_iterations")) {
      options.max_iterations = int_at(s["max_iterations"], "solver.max_iterations");
      if (options.max_iterations < 1) {
        throw ConfigError("solver.max_iterations", "must be positive");
      }
    }
    if (s.contains("initial_control")) {
      options.initial_control = vector_at(s["initial_control"], "solver.initial_control");
    }
  }

  try {
    BilinearDynamics dynamics(n, nu, std::move(a), std::move(b), std::move(ns),
                              std::move(g), std::move(x0));
    QuadraticCost cost(std::move(q), std::move(r), std::move(h));
    TimeGrid grid(t0, tf, steps);
    BilinearProblem problem(std::move(dynamics), std::move(cost), std::move(set),
                            grid);
    if (options.initial_control.empty()) {
      options.initial_control = default_initial_control(problem.set);
    } else if (!problem.set.contains(options.initial_control)) {
      throw ConfigError("solver.initial_control", "not in the admissible set");
    }
    return ParsedConfig{std::move(problem), std::move(options)};
  } catch (const DimensionError& e) {
    throw ConfigError("<problem>", e.what());
  }
}

ParsedConfig parse_config_file(const std::string& path,
                               std::optional<int> steps_override) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(path, "cannot open config file");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), steps_override);
}

std::string serialize_config(const BilinearProblem& problem,
                             const SolveOptions& options) {
  const BilinearDynamics& dyn = problem.dynamics;
  json root;
  root["n"] = dyn.n;
  root["nu"] = dyn.nu;

  json dynamics;
  dynamics["A"] = provider_to_json(dyn.A);
  dynamics["B"] = provider_to_json(dyn.B);
  json ns = json::array();
  for (const auto& ni : dyn.Ns) {
    ns.push_back(provider_to_json(ni));
  }
  dynamics["N"] = std::move(ns);
  dynamics["g"] = provider_to_json(dyn.g);
  dynamics["x0"] = json(dyn.x0);
  root["dynamics"] = std::move(dynamics);

  json cost;
  cost["Q"] = provider_to_json(problem.cost.Q);
  cost["R"] = provider_to_json(problem.cost.R);
  cost["H"] = matrix_to_json(problem.cost.H);
  root["cost"] = std::move(cost);

  json set;
  switch (problem.set.kind()) {
    case AdmissibleSet::Kind::kUnconstrained:
      set["kind"] = "unconstrained";
      break;
    case AdmissibleSet::Kind::kFiniteSet: {
      set["kind"] = "finite_set";
      json pts = json::array();
      for (const auto& p : problem.set.points()) {
        pts.push_back(json(p));
      }
      set["points"] = std::move(pts);
      break;
    }
    case AdmissibleSet::Kind::kBox:
      set["kind"] = "box";
      set["lo"] = json(problem.set.lo());
      set["hi"] = json(problem.set.hi());
      break;
  }
  root["admissible"] = std::move(set);

  root["grid"] = json{{"t0", problem.grid.t0()},
                      {"tf", problem.grid.tf()},
                      {"steps", problem.grid.steps()}};

  json solver;
  if (options.epsilon) {
    solver["epsilon"] = *options.epsilon;
  }
  solver["max_iterations"] = options.max_iterations;
  if (!options.initial_control.empty()) {
    solver["initial_control"] = json(options.initial_control);
  }
  root["solver"] = std::move(solver);

  std::string out;
  pretty_print(root, out, 0);
  out += "\n";
  return out;
}

}  // namespace cbqr
