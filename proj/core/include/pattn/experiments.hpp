#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pattn/training.hpp"

namespace pattn {

enum class Scenario { sphere, square, disk, rose, variety };

std::string scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);  // ConfigError on unknown

struct Dataset {
  std::vector<Vec> train_x, train_y;  // train_y carries the training noise
  std::vector<Vec> test_x, test_y;    // test_y is always the clean target
};

struct ScenarioBundle {
  Dataset data;
  /// Geometry used for d_K evaluation and readouts.
  std::shared_ptr<const ConstraintSet> set;
  /// Sampling source for particle pools.  Identical to `set` except for the
  /// sphere scenario, where pools subsample the training outputs.
  std::shared_ptr<const ConstraintSet> pool_set;
  /// Clean target function.
  std::function<Vec(ConstSpan)> true_f;
};

/// Deterministic given (scenario, seed); draws target parameters, inputs and
/// noise from independent derived streams.
ScenarioBundle generate_scenario(Scenario scenario, std::uint64_t seed,
                                 std::size_t train_size, std::size_t test_size,
                                 double noise_std);

struct ExperimentConfig {
  Scenario scenario = Scenario::sphere;
  std::vector<std::uint64_t> seeds;
  std::size_t train_size = 900;
  std::size_t test_size = 100;
  double noise_std = 0.0;
  TrainConfig mlp, transformer, ptransformer;
  std::vector<double> lambda_grid{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::string out_dir = "out";
  bool emit_traces = true;

  void validate() const;  // ConfigError on violations
  /// Tuned per-scenario preset (sizes, noise, architectures, hidden mode).
  static ExperimentConfig defaults_for(Scenario scenario);
  std::string to_json_string() const;
  static ExperimentConfig from_json_string(const std::string& text);
};

struct MetricsRow {
  std::string scenario;
  std::string model;  // "mlp" | "transformer" | "ptransformer"
  std::uint64_t seed = 0;
  double mse = 0.0;       // mean squared Euclidean error against clean targets
  double d_k = 0.0;       // mean distance of predictions to the constraint set
  double mse_ratio = 0.0; // vs the same seed's MLP
  bool failed = false;    // training diverged; metric fields are NaN
};

/// lambda * mse + (1 - lambda) * d_K; lambda outside [0,1] is a ConfigError.
double combined_score(double mse, double d_k, double lambda);

/// Trains and evaluates the three models for every seed.  Divergence marks
/// the affected row failed and the run continues.  When cfg.emit_traces is
/// set and out_dir is nonempty, per-run loss traces are written under
/// out_dir/traces/.  Row order (and hence CSV bytes) is deterministic.
std::vector<MetricsRow> run_benchmark(const ExperimentConfig& cfg);

/// Writes metrics.csv, summary.csv, frontier.csv, frontier.svg and, for the
/// planar scenarios, a particles/targets scatter SVG.  Deterministic bytes
/// given the same rows and config.
void emit_outputs(const std::vector<MetricsRow>& rows, const ExperimentConfig& cfg);

/// Fraction of seeds with at least one failed row (0 when no seeds ran).
double failed_seed_fraction(const std::vector<MetricsRow>& rows);

std::string dataset_to_json_string(const ScenarioBundle& bundle, Scenario scenario,
                                   std::uint64_t seed);

}  // namespace pattn
