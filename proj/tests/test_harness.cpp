// Scenario harness behavior: the config grammar and its validation, cloud
// reproducibility, thread-count-invariant experiment output, file emission,
// and command-line exit codes.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <gyroscale/cli.hpp>
#include <gyroscale/config.hpp>
#include <gyroscale/experiments.hpp>
#include <gyroscale/report.hpp>

using namespace gyroscale;
namespace fs = std::filesystem;

namespace {

fs::path temp_root() {
  const fs::path root = fs::temp_directory_path() / "gyroscale_harness";
  fs::create_directories(root);
  return root;
}

int cli(std::initializer_list<std::string> args) {
  std::vector<std::string> own{"gyroscale"};
  own.insert(own.end(), args.begin(), args.end());
  std::vector<char*> argv;
  argv.reserve(own.size());
  for (auto& s : own) argv.push_back(s.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

// CSV bytes with the wall-time field blanked; timings are the one permitted
// run-to-run difference
std::string masked_csv(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line, out;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) fields.push_back(cell);
    if (fields.size() == 7 && fields[5] != "wall_ms") fields[5] = "masked";
    for (size_t i = 0; i < fields.size(); ++i) out += (i ? "," : "") + fields[i];
    out += '\n';
  }
  return out;
}

ScenarioConfig small_convergence() {
  ScenarioConfig cfg;
  cfg.f0.family = InitialFamily::gyro_gaussian;
  cfg.T = 0.3;
  cfg.epsilon_list = {0.2, 0.1, 0.05};  // T / eps = 1.5: off the resonant grid
  cfg.cloud_log2 = 8;
  return cfg;
}

ScenarioConfig degenerate_convergence() {
  ScenarioConfig cfg;
  cfg.T = 0.5;
  cfg.epsilon_list = {0.125, 0.05, 0.025};  // T / eps all whole: exact match
  cfg.cloud_log2 = 8;
  return cfg;
}

}  // namespace

TEST_CASE("canonical serialization survives a round trip") {
  ScenarioConfig cfg;
  cfg.fields.family = FieldFamily::parallel_uniform;
  cfg.fields.e0 = Vec3(0.0, 12.0, 0.0);
  cfg.f0.family = InitialFamily::gyro_gaussian;
  cfg.f0.mod_amp = 0.05;
  cfg.epsilon_list = {0.2, 0.1, 0.05};
  cfg.seed = 7;
  cfg.cloud_v_sigma = Vec3(1.0, 0.5, 0.5);

  const std::string text = serialize_config(cfg);
  const ScenarioConfig back = parse_config(text, "roundtrip");
  CHECK(serialize_config(back) == text);
  CHECK(config_hash(back) == config_hash(cfg));

  // the fingerprint separates scenarios
  ScenarioConfig other = cfg;
  other.seed = 8;
  CHECK(config_hash(other) != config_hash(cfg));
  CHECK(config_hash(ScenarioConfig{}) != config_hash(cfg));
}

TEST_CASE("a minimal scenario file fills in documented defaults") {
  const ScenarioConfig cfg = parse_config("[scenario]\nfield_family = zero\n", "minimal");
  CHECK(cfg.T == 0.5);
  CHECK(cfg.n_tau == 64);
  CHECK(cfg.cloud_log2 == 14);
  CHECK(cfg.seed == 42u);
  CHECK(cfg.experiment == "convergence");
  REQUIRE(cfg.epsilon_list.size() == 4);
  CHECK(cfg.epsilon_list[0] == 0.2);
  CHECK(cfg.epsilon_list[3] == 0.025);
  CHECK(cfg.output.format == "both");
}

TEST_CASE("bad configs are rejected with precise messages") {
  const std::string unknown = error_of([] {
    parse_config("[scenario]\nT = 0.5\nbogus_key = 1\n", "probe");
  });
  CHECK(unknown.find("bogus_key") != std::string::npos);
  CHECK(unknown.find("3") != std::string::npos);  // the offending line number

  const std::string section = error_of([] { parse_config("[bogus]\nx = 1\n", "probe"); });
  CHECK(section.find("bogus") != std::string::npos);

  const std::string order = error_of([] {
    parse_config("[scenario]\nepsilon_list = 0.1 0.2\n", "probe");
  });
  CHECK(order.find("epsilon_list") != std::string::npos);

  const std::string name = error_of([] { parse_config("[experiment]\nname = bogus\n", "probe"); });
  CHECK(name.find("name") != std::string::npos);

  const std::string missing = error_of([] { load_config("/nonexistent/path/probe.toml"); });
  CHECK(missing.find("cannot open") != std::string::npos);
}

TEST_CASE("clouds regenerate bit-identically with usable weights") {
  CloudSpec spec;
  spec.size_log2 = 12;
  const SampleCloud a = SampleCloud::generate(spec);
  const SampleCloud b = SampleCloud::generate(spec);
  REQUIRE(a.size() == b.size());
  for (int i = 0; i < a.size(); ++i) {
    CHECK(a.points()[i].x == b.points()[i].x);
    CHECK(a.points()[i].v == b.points()[i].v);
    CHECK(a.points()[i].w == b.points()[i].w);
    CHECK(a.points()[i].w > 0.0);
    CHECK(std::isfinite(a.points()[i].w));
  }

  // the scenario plumbing hands the requested shape through
  ScenarioConfig cfg;
  cfg.cloud_log2 = 9;
  cfg.seed = 11;
  cfg.cloud_v_sigma = Vec3(1.0, 0.5, 0.5);
  const CloudSpec from_cfg = scenario_cloud(cfg, CloudKind::gauss_weighted);
  CHECK(from_cfg.size_log2 == 9);
  CHECK(from_cfg.seed == 11u);
  CHECK(from_cfg.v_sigma == Vec3(1.0, 0.5, 0.5));
}

TEST_CASE("weighted norms are stable under cloud doubling") {
  const InitialDistribution f0;
  double norms[2];
  int k = 0;
  for (const int lg : {16, 18}) {
    CloudSpec spec;
    spec.size_log2 = lg;
    const SampleCloud cloud = SampleCloud::generate(spec);
    std::vector<double> w(cloud.size()), f(cloud.size());
    for (int i = 0; i < cloud.size(); ++i) {
      w[i] = cloud.points()[i].w;
      f[i] = f0.value(cloud.points()[i].x, cloud.points()[i].v);
    }
    norms[k++] = cloud_norm(w, f);
  }
  CHECK(std::abs(norms[0] - norms[1]) / norms[1] <= 1e-2);
}

TEST_CASE("experiment rows are identical across thread counts") {
  const ScenarioConfig cfg = small_convergence();
  const ExperimentReport r1 = run_experiment(cfg, 1);
  const ExperimentReport r8 = run_experiment(cfg, 8);

  CHECK(r1.hash == r8.hash);
  CHECK(r1.pass == r8.pass);
  CHECK(r1.degenerate_exact == r8.degenerate_exact);
  CHECK(r1.slope == r8.slope);
  CHECK(r1.fit_residual == r8.fit_residual);
  REQUIRE(r1.rows.size() == r8.rows.size());
  for (size_t i = 0; i < r1.rows.size(); ++i) {
    CHECK(r1.rows[i].metric == r8.rows[i].metric);
    CHECK(r1.rows[i].epsilon == r8.rows[i].epsilon);
    CHECK(r1.rows[i].value == r8.rows[i].value);
    CHECK(r1.rows[i].est_error == r8.rows[i].est_error);
  }

  const fs::path d1 = temp_root() / "threads1";
  const fs::path d8 = temp_root() / "threads8";
  fs::remove_all(d1);
  fs::remove_all(d8);
  write_csv(r1, d1.string());
  write_csv(r8, d8.string());
  CHECK(masked_csv(d1 / "convergence.csv") == masked_csv(d8 / "convergence.csv"));
}

TEST_CASE("sweeps collapse gracefully and dispatch by name") {
  SUBCASE("the exact-resonance scenario reports itself degenerate") {
    const ExperimentReport rep = run_experiment(degenerate_convergence(), 4);
    CHECK(rep.degenerate_exact);
    CHECK(!rep.slope_fitted);
    CHECK(rep.pass);
    for (const auto& row : rep.rows) CHECK(row.value <= 1e-8);
  }

  SUBCASE("a short non-degenerate sweep cannot certify a slope") {
    ScenarioConfig cfg = small_convergence();
    cfg.epsilon_list = {0.2, 0.1};
    const ExperimentReport rep = run_experiment(cfg, 4);
    CHECK(!rep.pass);
    CHECK(!rep.slope_fitted);
    bool mentioned = false;
    for (const auto& line : rep.gate_lines)
      mentioned = mentioned || line.find("fewer than 3") != std::string::npos;
    CHECK(mentioned);
  }

  SUBCASE("dispatch follows the experiment name") {
    ScenarioConfig cfg = small_convergence();
    cfg.experiment = "classical";
    cfg.n_cyl_log2 = 6;
    cfg.epsilon_list = {0.2, 0.1, 0.05};
    const ExperimentReport rep = run_experiment(cfg, 4);
    CHECK(rep.experiment == "classical");
    bool has_m1 = false;
    for (const auto& row : rep.rows) has_m1 = has_m1 || row.metric.rfind("m1_norm", 0) == 0;
    CHECK(has_m1);
  }
}

TEST_CASE("cloud refinement holds the measured distance steady") {
  ScenarioConfig cfg = small_convergence();
  cfg.T = 0.53;
  cfg.epsilon_list = {0.1};
  double d[2];
  int k = 0;
  for (const int lg : {10, 11}) {
    cfg.cloud_log2 = lg;
    const ExperimentReport rep = run_experiment(cfg, 4);
    REQUIRE(rep.rows.size() == 1);
    d[k++] = rep.rows[0].value;
  }
  REQUIRE(d[1] > 0.0);
  CHECK(std::abs(d[0] - d[1]) / d[1] <= 0.1);
}

TEST_CASE("command line drives the full pipeline") {
  const fs::path root = temp_root();

  SUBCASE("a passing run emits outputs and exits zero") {
    ScenarioConfig cfg = degenerate_convergence();
    cfg.output.dir = (root / "out_ok").string();
    fs::remove_all(cfg.output.dir);
    const fs::path cfg_path = root / "ok.toml";
    std::ofstream(cfg_path) << serialize_config(cfg);

    CHECK(cli({"run", cfg_path.string(), "--threads", "2"}) == 0);
    CHECK(fs::exists(fs::path(cfg.output.dir) / "convergence.csv"));
    CHECK(fs::exists(fs::path(cfg.output.dir) / "convergence.json"));
    CHECK(report_command(cfg.output.dir) == 0);
  }

  SUBCASE("a failed gate exits one") {
    ScenarioConfig cfg = small_convergence();
    cfg.epsilon_list = {0.2, 0.1};
    cfg.cloud_log2 = 6;
    cfg.output.dir = (root / "out_gate").string();
    const fs::path cfg_path = root / "gate.toml";
    std::ofstream(cfg_path) << serialize_config(cfg);
    CHECK(cli({"run", cfg_path.string(), "--threads", "2"}) == 1);
  }

  SUBCASE("usage and config errors exit two") {
    CHECK(cli({"run", "/nonexistent/probe.toml"}) == 2);

    const fs::path bad = root / "bad.toml";
    std::ofstream(bad) << "[scenario]\nbogus_key = 1\n";
    CHECK(cli({"run", bad.string()}) == 2);

    CHECK(cli({"frobnicate"}) == 2);
  }

  SUBCASE("the directory summarizer rejects mixed or empty input") {
    const fs::path mixed = root / "out_mixed";
    fs::remove_all(mixed);
    ScenarioConfig a = small_convergence();
    a.epsilon_list = {0.1};
    a.cloud_log2 = 6;
    const ExperimentReport ra = run_experiment(a, 2);
    ScenarioConfig b = a;
    b.seed = 9;
    b.experiment = "first_order";
    ExperimentReport rb = run_experiment(b, 2);
    write_csv(ra, mixed.string());
    write_csv(rb, mixed.string());
    CHECK_THROWS_AS(report_command(mixed.string()), ConfigError);

    const fs::path empty = root / "out_empty";
    fs::remove_all(empty);
    fs::create_directories(empty);
    CHECK_THROWS_AS(report_command(empty.string()), ConfigError);
  }
}
