#include <gyroscale/cli.hpp>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <gyroscale/cloud.hpp>
#include <gyroscale/config.hpp>
#include <gyroscale/experiments.hpp>
#include <gyroscale/report.hpp>
#include <gyroscale/tau_calculus.hpp>

namespace gyroscale {
namespace {

std::string fmtg(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double frac(double x) { return x - std::floor(x); }

struct CheckResult {
  bool ok;
  std::string detail;
};

CheckResult check_rotation_identities() {
  double worst = 0.0;
  for (int i = 1; i <= 100; ++i) {
    const double t1 = frac(0.6180339887498949 * i);
    const double t2 = frac(0.4142135623730951 * i);
    const Mat3 r1 = rotation(t1), r2 = rotation(t2);
    worst = std::max(worst, (r1 * r1.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff());
    worst = std::max(worst, (r1 * r2 - rotation(t1 + t2)).cwiseAbs().maxCoeff());
    worst = std::max(worst, (r1 * Vec3::UnitX() - Vec3::UnitX()).cwiseAbs().maxCoeff());
    worst = std::max(worst, std::abs(r1.determinant() - 1.0));
  }
  return {worst <= 1e-12, "max deviation " + fmtg(worst)};
}

CheckResult check_phase_map_roundtrip() {
  double worst = 0.0;
  for (int i = 1; i <= 100; ++i) {
    const double tau = frac(0.6180339887498949 * i);
    const Vec3 v(4.0 * frac(0.7548776662466927 * i) - 2.0,
                 4.0 * frac(0.5698402909980532 * i) - 2.0,
                 4.0 * frac(0.3247179572447460 * i) - 2.0);
    const Vec3 u = ucar(tau, v);
    worst = std::max(worst, (ucar_inv(tau, u) - v).cwiseAbs().maxCoeff());
    worst = std::max(worst, std::abs(u.norm() - v.norm()));
  }
  return {worst <= 1e-12, "max deviation " + fmtg(worst)};
}

CheckResult check_alpha_filter() {
  const PeriodicProfile q = PeriodicProfile::sample(
      Period::alpha, 64, [](double a) { return 3.0 + std::cos(a) + std::sin(5.0 * a); });
  const double mean_err = std::abs(alpha_project(q) - 3.0);
  const double refilter = std::abs(alpha_project(alpha_fluct(q)));
  const double worst = std::max(mean_err, refilter);
  return {worst <= 1e-12, "max deviation " + fmtg(worst)};
}

CheckResult check_tau_filter() {
  const Vec3 a(0.3, -1.1, 0.7);
  const TauField g = [&](double tau, const Vec3& v) {
    return ucar(tau, v).dot(a) + std::cos(two_pi * tau);
  };
  const Vec3 v(0.9, -0.4, 1.3);
  double worst = 0.0;
  for (const double tau : {0.13, 0.37, 0.81}) {
    const double ker = tau_ker_project(g, tau, v, 16);
    worst = std::max(worst, std::abs(ker - ucar(tau, v).dot(a)));
    worst = std::max(worst, std::abs(tau_ker_project_corotating(g, tau, v, 16) - ker));
    worst = std::max(worst, std::abs(tau_im_part(g, tau, v, 16) - std::cos(two_pi * tau)));
  }
  return {worst <= 1e-10, "max deviation " + fmtg(worst)};
}

CheckResult check_antiderivative() {
  const TauField h = [](double tau, const Vec3& v) {
    return std::cos(two_pi * tau) * (1.0 + 0.1 * v.squaredNorm()) +
           std::sin(two_pi * tau) * v(0);
  };
  const Vec3 v(0.5, 1.2, -0.8);
  const CharacteristicAntiderivative ca(h, 0.3, v, 32);
  double worst = std::abs(ca.measured_mean());
  worst = std::max(worst, std::abs(ca.fast_operator(0.3, 1e-4) - h(0.3, v)));
  return {worst <= 1e-6, "max deviation " + fmtg(worst)};
}

CheckResult check_config_round_trip() {
  ScenarioConfig cfg;
  cfg.epsilon_list = {0.2, 0.1, 0.05};
  const std::string s1 = serialize_config(cfg);
  const ScenarioConfig back = parse_config(s1, "roundtrip");
  const bool ok = serialize_config(back) == s1 && config_hash(back) == config_hash(cfg);
  return {ok, ok ? "stable" : "serialization changed under reload"};
}

CheckResult check_cloud_norm_homogeneity() {
  CloudSpec cs;
  cs.size_log2 = 10;
  const SampleCloud cloud = SampleCloud::generate(cs);
  const int n = cloud.size();
  std::vector<double> w(n), f(n), f2(n), zero(n, 0.0);
  for (int i = 0; i < n; ++i) {
    w[i] = cloud.points()[i].w;
    f[i] = std::sin(1.0 + 0.37 * i);
    f2[i] = 2.0 * f[i];
  }
  const double base = cloud_norm(w, f);
  const double rel = std::abs(cloud_norm(w, f2) - 2.0 * base) / (2.0 * base);
  const double worst = std::max(rel, cloud_norm(w, zero));
  return {worst <= 1e-14, "max deviation " + fmtg(worst)};
}

int run_check_suite() {
  const std::pair<const char*, CheckResult (*)()> checks[] = {
      {"rotation_identities", check_rotation_identities},
      {"phase_map_roundtrip", check_phase_map_roundtrip},
      {"alpha_filter_projection", check_alpha_filter},
      {"tau_filter_projection", check_tau_filter},
      {"characteristic_antiderivative", check_antiderivative},
      {"config_round_trip", check_config_round_trip},
      {"cloud_norm_homogeneity", check_cloud_norm_homogeneity},
  };
  bool all_ok = true;
  for (const auto& [name, fn] : checks) {
    const CheckResult r = fn();
    std::printf("%s %-30s %s\n", r.ok ? "[ok]  " : "[FAIL]", name, r.detail.c_str());
    all_ok = all_ok && r.ok;
  }
  std::printf("check: %s\n", all_ok ? "PASS" : "FAIL");
  return all_ok ? 0 : 1;
}

void emit_outputs(const ExperimentReport& rep, const OutputConfig& out) {
  if (out.format == "csv" || out.format == "both") write_csv(rep, out.dir);
  if (out.format == "json" || out.format == "both") write_json(rep, out.dir);
}

bool print_report(const ExperimentReport& rep, bool strict) {
  for (const auto& line : rep.gate_lines) std::printf("%s\n", line.c_str());
  for (const auto& warn : rep.warnings) std::printf("[warn] %s\n", warn.c_str());
  bool ok = rep.pass;
  if (strict && !rep.warnings.empty()) ok = false;
  std::printf("%s: %s (%.1f s)\n", rep.experiment.c_str(), ok ? "PASS" : "FAIL",
              rep.total_wall_ms / 1000.0);
  return ok;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Two-scale decomposition experiments for strongly magnetized transport"};
  app.require_subcommand(1);

  int threads = 0;
  std::string out_override, format_override;
  bool strict = false;
  app.add_option("--threads", threads, "worker threads (0 = hardware concurrency)");
  app.add_option("--out", out_override, "output directory (overrides config)");
  app.add_option("--format", format_override, "output format (overrides config)")
      ->check(CLI::IsMember({"csv", "json", "both"}));
  app.add_flag("--strict", strict, "treat warnings as failures");

  CLI::App* cmd_check = app.add_subcommand("check", "run the built-in property suite");
  CLI::App* cmd_run = app.add_subcommand("run", "run the experiment named by a config");
  std::string run_config;
  cmd_run->add_option("config", run_config, "config file")->required();
  CLI::App* cmd_sweep = app.add_subcommand("sweep", "run every experiment from one config");
  std::string sweep_config;
  cmd_sweep->add_option("config", sweep_config, "config file")->required();
  CLI::App* cmd_report = app.add_subcommand("report", "summarize an output directory");
  std::string report_dir;
  cmd_report->add_option("dir", report_dir, "directory of CSV rows")->required();
  for (CLI::App* sub : {cmd_check, cmd_run, cmd_sweep, cmd_report}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*cmd_check) return run_check_suite();
    if (*cmd_report) return report_command(report_dir);

    ScenarioConfig cfg = load_config(*cmd_run ? run_config : sweep_config);
    if (!out_override.empty()) cfg.output.dir = out_override;
    if (!format_override.empty()) cfg.output.format = format_override;

    if (*cmd_run) {
      const ExperimentReport rep = run_experiment(cfg, threads);
      emit_outputs(rep, cfg.output);
      return print_report(rep, strict) ? 0 : 1;
    }

    // sweep: all three experiments from the same scenario
    bool all_ok = true;
    double total_ms = 0.0;
    for (const char* name : {"convergence", "first_order", "classical"}) {
      cfg.experiment = name;
      const ExperimentReport rep = run_experiment(cfg, threads);
      emit_outputs(rep, cfg.output);
      all_ok = print_report(rep, strict) && all_ok;
      total_ms += rep.total_wall_ms;
    }
    if (total_ms > 15.0 * 60.0 * 1000.0)
      std::printf("[warn] sweep took %.1f min, over the 15 min budget\n", total_ms / 60000.0);
    std::printf("sweep: %s\n", all_ok ? "PASS" : "FAIL");
    return all_ok ? 0 : 1;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace gyroscale
