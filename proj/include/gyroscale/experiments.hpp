// Epsilon-sweep experiment drivers. Each runs one scenario over its epsilon
// list, collects metric rows with error estimates, and evaluates its gates;
// results are deterministic for a fixed config regardless of thread count.
#ifndef GYROSCALE_EXPERIMENTS
#define GYROSCALE_EXPERIMENTS

#include <string>
#include <vector>

#include <gyroscale/config.hpp>

namespace gyroscale {

struct MetricRow {
  std::string experiment;
  double epsilon = 0.0;
  std::string metric;
  double value = 0.0;
  double est_error = 0.0;
  double wall_ms = 0.0;  // informational only, masked by determinism checks
};

struct ExperimentReport {
  std::string experiment;
  std::string hash;  // config fingerprint carried into every output row
  std::vector<MetricRow> rows;
  std::vector<std::string> gate_lines;  // one human-readable verdict per gate
  std::vector<std::string> warnings;
  bool degenerate_exact = false;  // sweep collapsed to machine-level values
  bool slope_fitted = false;
  double slope = 0.0;
  double fit_residual = 0.0;
  bool pass = false;
  double total_wall_ms = 0.0;
};

// Distance from the solution to the rotated limit profile at t = T, per eps.
ExperimentReport experiment_two_scale_convergence(const ScenarioConfig& cfg, int threads = 0);

// Norms of the remainder split (rho, g1, h) at t = T, the measured invariant
// component of the raw corrector, and the window freezing drift, per eps.
ExperimentReport experiment_first_order(const ScenarioConfig& cfg, int threads = 0);

// Gyroaverage fluctuation norms m1, n at t in {0, T/2, T} on a cylindrical
// sub-cloud, plus the weak-form residual at the middle eps.
ExperimentReport experiment_classical_mm(const ScenarioConfig& cfg, int threads = 0);

// Dispatches on cfg.experiment.
ExperimentReport run_experiment(const ScenarioConfig& cfg, int threads = 0);

}  // namespace gyroscale

#endif
