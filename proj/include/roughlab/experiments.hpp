#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "roughlab/approx.hpp"
#include "roughlab/path.hpp"
#include "roughlab/table.hpp"
#include "roughlab/vector_field.hpp"

namespace roughlab {

struct ExperimentConfig {
  std::string name;
  int d = 2;
  int e = 2;
  int depth = 2;
  std::optional<int> mesh_min;  // dissections of size 2^k, k in [mesh_min, mesh_max]
  std::optional<int> mesh_max;
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  /// Command-specific keys: "fields", "v", "lambda", "driver", "phi", "case",
  /// "p", "gamma", "input", "s", "t". Unknown keys are rejected.
  nlohmann::json options = nlohmann::json::object();

  static ExperimentConfig from_json(const std::string& name, const nlohmann::json& j);
  int mesh_lo(int fallback) const { return mesh_min.value_or(fallback); }
  int mesh_hi(int fallback) const { return mesh_max.value_or(fallback); }
  void validate() const;
};

struct Check {
  std::string name;
  double value;
  bool passed;
};

struct ExperimentResult {
  Table table{{}};
  std::vector<Check> checks;
  bool passed() const;
};

const std::vector<std::string>& experiment_names();
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Log-signature coordinates of `x` over [s, t], plus a Chen split check at the midpoint.
ExperimentResult run_signature(const PiecewisePath& x, int depth, std::optional<double> s = {},
                               std::optional<double> t = {});
ExperimentResult run_sussmann(const ExperimentConfig& cfg);
ExperimentResult run_mcshane(const ExperimentConfig& cfg);
ExperimentResult run_drift_equiv(const ExperimentConfig& cfg);
ExperimentResult run_optimality(const ExperimentConfig& cfg);
ExperimentResult run_euler_rate(const ExperimentConfig& cfg);

/// x^i_t = cos(m t) (i = 2m-2) or sin(m t) (i = 2m-1), linear between
/// `segments` uniform knots on [0, 1].
PiecewisePath smooth_driver(int d, std::size_t segments);

/// Default perturbation lambda e_{(2,1,...,1)} = lambda [e1,[e1,...,[e1,e2]]].
PerturbationSpec default_perturbation(const TensorShape& shape, double lambda);

/// Each value at most (1 + slack) times the previous one.
bool decreasing_within(const std::vector<double>& v, double slack);
/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Non-commuting 2x2 matrices used by the default linear configurations.
std::vector<Mat> default_linear_matrices(int e, int d, std::uint64_t seed);

}  // namespace roughlab
