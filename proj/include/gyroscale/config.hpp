// Scenario and experiment configuration: the flat-section text schema, its
// validation, the canonical serialization used for round-trips, and the
// content hash stamped on every output row.

#ifndef GYROSCALE_CONFIG
#define GYROSCALE_CONFIG

#include <gyroscale/cloud.hpp>
#include <gyroscale/fields.hpp>
#include <gyroscale/flow.hpp>
#include <gyroscale/gradients.hpp>
#include <gyroscale/initial.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace gyroscale {

// Raised on missing files, syntax errors (with line numbers), unknown keys,
// and validation failures (naming the offending key).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OutputConfig {
  std::string dir = "out";
  std::string format = "both";  // csv | json | both
};

// One experiment scenario: fields, initial datum, horizon, epsilon sweep,
// sample sizes, integrator and gradient choices, and output routing.
struct ScenarioConfig {
  FieldConfig fields;
  InitialDistribution f0;
  double T = 0.5;
  std::vector<double> epsilon_list = {0.2, 0.1, 0.05, 0.025};

  std::string experiment = "convergence";  // convergence | first_order | classical
  int cloud_log2 = 14;
  int n_cyl_log2 = 8;
  int n_alpha = 32;
  int n_tau = 64;
  int n_sigma = 16;
  unsigned seed = 42;
  Vec3 cloud_x_center = Vec3::Zero();
  Vec3 cloud_x_sigma = Vec3::Ones();
  Vec3 cloud_v_sigma = Vec3::Ones();
  double v_perp_min = 0.3;
  double v_perp_max = 2.5;

  IntegratorSpec integrator;
  GradientSpec gradients;
  OutputConfig output;
};

// Parses and validates a scenario file. The format is flat sections of
// key = value lines; '#' starts a comment; vector values are space-separated
// numbers. Unknown sections or keys are rejected with their line number, as
// are values that fail validation.
ScenarioConfig load_config(const std::string& path);

// Same grammar, from an in-memory buffer (the path only labels errors).
ScenarioConfig parse_config(const std::string& text, const std::string& label);

// Canonical text form: fixed section and key order, full-precision numbers.
// load(serialize(c)) reproduces c exactly.
std::string serialize_config(const ScenarioConfig& cfg);

// FNV-1a 64 over the canonical serialization, as 16 hex digits.
std::string config_hash(const ScenarioConfig& cfg);

// The phase-space cloud a scenario asks for, in the requested kind.
CloudSpec scenario_cloud(const ScenarioConfig& cfg, CloudKind kind);

}  // namespace gyroscale

#endif  // GYROSCALE_CONFIG
