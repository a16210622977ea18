#include <gyroscale/config.hpp>

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace gyroscale {
namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(const std::string& label, int line, const std::string& what) {
  throw ConfigError(label + ":" + std::to_string(line) + ": " + what);
}

std::vector<double> parse_list(const std::string& label, int line, const std::string& key,
                               const std::string& value) {
  std::vector<double> out;
  const char* p = value.c_str();
  while (*p) {
    char* end = nullptr;
    const double x = std::strtod(p, &end);
    if (end == p) fail(label, line, "key '" + key + "': expected numbers, got '" + value + "'");
    out.push_back(x);
    p = end;
    while (*p == ' ' || *p == '\t') ++p;
  }
  if (out.empty()) fail(label, line, "key '" + key + "': empty value");
  return out;
}

double parse_num(const std::string& label, int line, const std::string& key,
                 const std::string& value) {
  const auto v = parse_list(label, line, key, value);
  if (v.size() != 1) fail(label, line, "key '" + key + "': expected one number");
  return v[0];
}

int parse_int(const std::string& label, int line, const std::string& key,
              const std::string& value) {
  const double x = parse_num(label, line, key, value);
  const int n = static_cast<int>(x);
  if (static_cast<double>(n) != x) fail(label, line, "key '" + key + "': expected an integer");
  return n;
}

Vec3 parse_vec3(const std::string& label, int line, const std::string& key,
                const std::string& value) {
  const auto v = parse_list(label, line, key, value);
  if (v.size() != 3) fail(label, line, "key '" + key + "': expected three numbers");
  return Vec3(v[0], v[1], v[2]);
}

Mat3 parse_mat3(const std::string& label, int line, const std::string& key,
                const std::string& value) {
  const auto v = parse_list(label, line, key, value);
  if (v.size() != 9) fail(label, line, "key '" + key + "': expected nine numbers (rows)");
  Mat3 m;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = v[3 * r + c];
  return m;
}

[[noreturn]] void invalid(const std::string& key, const std::string& what) {
  throw ConfigError("config validation: key '" + key + "' " + what);
}

void validate(const ScenarioConfig& cfg) {
  if (!(cfg.T > 0.0)) invalid("T", "must be positive");
  if (cfg.epsilon_list.empty()) invalid("epsilon_list", "must be nonempty");
  for (std::size_t i = 0; i < cfg.epsilon_list.size(); ++i) {
    if (!(cfg.epsilon_list[i] > 0.0)) invalid("epsilon_list", "entries must be positive");
    if (i > 0 && !(cfg.epsilon_list[i] < cfg.epsilon_list[i - 1]))
      invalid("epsilon_list", "must be strictly decreasing");
  }
  if (cfg.cloud_log2 < 4 || cfg.cloud_log2 > 22) invalid("cloud_log2", "must be in [4, 22]");
  if (cfg.n_cyl_log2 < 2 || cfg.n_cyl_log2 > 18) invalid("n_cyl_log2", "must be in [2, 18]");
  if (cfg.n_alpha < 8 || cfg.n_alpha % 2 != 0) invalid("n_alpha", "must be even and >= 8");
  if (cfg.n_tau < 8 || cfg.n_tau % 2 != 0) invalid("n_tau", "must be even and >= 8");
  if (cfg.n_sigma < 8) invalid("n_sigma", "must be >= 8");
  if (!(cfg.integrator.dt_max > 0.0)) invalid("dt_max", "must be positive");
  if (cfg.integrator.substeps_per_gyroperiod < 4) invalid("substeps_per_gyroperiod", "must be >= 4");
  if (!(cfg.gradients.fd_step > 0.0)) invalid("fd_step", "must be positive");
  if (!(cfg.f0.sigma_x > 0.0)) invalid("f0_sigma_x", "must be positive");
  if (!(cfg.f0.sigma_v > 0.0)) invalid("f0_sigma_v", "must be positive");
  for (int c = 0; c < 3; ++c) {
    if (!(cfg.f0.sig_x(c) > 0.0)) invalid("f0_sig_x", "entries must be positive");
    if (!(cfg.f0.sig_v(c) > 0.0)) invalid("f0_sig_v", "entries must be positive");
    if (!(cfg.cloud_x_sigma(c) >= 0.0)) invalid("cloud_x_sigma", "entries must be nonnegative");
    if (!(cfg.cloud_v_sigma(c) >= 0.0)) invalid("cloud_v_sigma", "entries must be nonnegative");
  }
  if (!(std::abs(cfg.f0.mod_amp) < 1.0)) invalid("f0_mod_amp", "must satisfy |a| < 1");
  if (cfg.f0.mod_k < 1) invalid("f0_mod_k", "must be >= 1");
  if (!(cfg.fields.env_radius > 0.0)) invalid("field_env_radius", "must be positive");
  if (!(cfg.v_perp_min > 0.0)) invalid("v_perp_min", "must be positive");
  if (!(cfg.v_perp_max > cfg.v_perp_min)) invalid("v_perp_max", "must exceed v_perp_min");
  if (cfg.experiment != "convergence" && cfg.experiment != "first_order" &&
      cfg.experiment != "classical")
    invalid("name", "must be one of convergence, first_order, classical");
  if (cfg.output.format != "csv" && cfg.output.format != "json" && cfg.output.format != "both")
    invalid("format", "must be one of csv, json, both");
  if (cfg.output.dir.empty()) invalid("dir", "must be nonempty");
}

}  // namespace

ScenarioConfig parse_config(const std::string& text, const std::string& label) {
  ScenarioConfig cfg;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(label, line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section != "scenario" && section != "experiment" && section != "integrator" &&
          section != "gradient" && section != "output")
        fail(label, line, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(label, line, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (section.empty()) fail(label, line, "key '" + key + "' outside any section");
    if (key.empty() || value.empty()) fail(label, line, "empty key or value");

    auto num = [&] { return parse_num(label, line, key, value); };
    auto integer = [&] { return parse_int(label, line, key, value); };
    auto vec3 = [&] { return parse_vec3(label, line, key, value); };
    auto mat3 = [&] { return parse_mat3(label, line, key, value); };
    auto unknown = [&] { fail(label, line, "unknown key '" + key + "' in [" + section + "]"); };

    if (section == "scenario") {
      if (key == "field_family") {
        if (value == "zero") cfg.fields.family = FieldFamily::zero;
        else if (value == "uniform") cfg.fields.family = FieldFamily::uniform;
        else if (value == "parallel_uniform") cfg.fields.family = FieldFamily::parallel_uniform;
        else if (value == "smooth_bounded") cfg.fields.family = FieldFamily::smooth_bounded;
        else fail(label, line, "key 'field_family': unknown family '" + value + "'");
      } else if (key == "field_e0") cfg.fields.e0 = vec3();
      else if (key == "field_b0") cfg.fields.b0 = vec3();
      else if (key == "field_amp_e") cfg.fields.amp_e = vec3();
      else if (key == "field_amp_b") cfg.fields.amp_b = vec3();
      else if (key == "field_k_e") cfg.fields.k_e = mat3();
      else if (key == "field_k_b") cfg.fields.k_b = mat3();
      else if (key == "field_phase_e") cfg.fields.phase_e = vec3();
      else if (key == "field_phase_b") cfg.fields.phase_b = vec3();
      else if (key == "field_env_radius") cfg.fields.env_radius = num();
      else if (key == "f0_family") {
        if (value == "isotropic_gaussian") cfg.f0.family = InitialFamily::isotropic_gaussian;
        else if (value == "anisotropic_gaussian") cfg.f0.family = InitialFamily::anisotropic_gaussian;
        else if (value == "gyro_gaussian") cfg.f0.family = InitialFamily::gyro_gaussian;
        else fail(label, line, "key 'f0_family': unknown family '" + value + "'");
      } else if (key == "f0_center") cfg.f0.x0 = vec3();
      else if (key == "f0_sigma_x") cfg.f0.sigma_x = num();
      else if (key == "f0_sigma_v") cfg.f0.sigma_v = num();
      else if (key == "f0_sig_x") cfg.f0.sig_x = vec3();
      else if (key == "f0_sig_v") cfg.f0.sig_v = vec3();
      else if (key == "f0_mod_amp") cfg.f0.mod_amp = num();
      else if (key == "f0_mod_k") cfg.f0.mod_k = integer();
      else if (key == "T") cfg.T = num();
      else if (key == "epsilon_list") cfg.epsilon_list = parse_list(label, line, key, value);
      else unknown();
    } else if (section == "experiment") {
      if (key == "name") cfg.experiment = value;
      else if (key == "cloud_log2") cfg.cloud_log2 = integer();
      else if (key == "n_cyl_log2") cfg.n_cyl_log2 = integer();
      else if (key == "n_alpha") cfg.n_alpha = integer();
      else if (key == "n_tau") cfg.n_tau = integer();
      else if (key == "n_sigma") cfg.n_sigma = integer();
      else if (key == "seed") cfg.seed = static_cast<unsigned>(integer());
      else if (key == "cloud_x_center") cfg.cloud_x_center = vec3();
      else if (key == "cloud_x_sigma") cfg.cloud_x_sigma = vec3();
      else if (key == "cloud_v_sigma") cfg.cloud_v_sigma = vec3();
      else if (key == "v_perp_min") cfg.v_perp_min = num();
      else if (key == "v_perp_max") cfg.v_perp_max = num();
      else unknown();
    } else if (section == "integrator") {
      if (key == "dt_max") cfg.integrator.dt_max = num();
      else if (key == "substeps_per_gyroperiod") cfg.integrator.substeps_per_gyroperiod = integer();
      else if (key == "method") {
        if (value == "strang") cfg.integrator.method = FlowMethod::strang_split_exact_rotation;
        else if (value == "rk4") cfg.integrator.method = FlowMethod::rk4_reference;
        else fail(label, line, "key 'method': unknown method '" + value + "'");
      } else unknown();
    } else if (section == "gradient") {
      if (key == "method") {
        if (value == "analytic") cfg.gradients.method = GradientMethod::analytic_when_available;
        else if (value == "central_fd") cfg.gradients.method = GradientMethod::central_fd;
        else fail(label, line, "key 'method': unknown method '" + value + "'");
      } else if (key == "fd_step") cfg.gradients.fd_step = num();
      else unknown();
    } else {  // output
      if (key == "dir") cfg.output.dir = value;
      else if (key == "format") cfg.output.format = value;
      else unknown();
    }
  }
  validate(cfg);
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

std::string serialize_config(const ScenarioConfig& cfg) {
  std::ostringstream out;
  auto vec3 = [](const Vec3& v) { return fmt(v(0)) + " " + fmt(v(1)) + " " + fmt(v(2)); };
  auto mat3 = [&](const Mat3& m) {
    std::string s;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) s += (s.empty() ? "" : " ") + fmt(m(r, c));
    return s;
  };
  const char* ff = "zero";
  switch (cfg.fields.family) {
    case FieldFamily::zero: ff = "zero"; break;
    case FieldFamily::uniform: ff = "uniform"; break;
    case FieldFamily::parallel_uniform: ff = "parallel_uniform"; break;
    case FieldFamily::smooth_bounded: ff = "smooth_bounded"; break;
  }
  const char* f0f = "isotropic_gaussian";
  switch (cfg.f0.family) {
    case InitialFamily::isotropic_gaussian: f0f = "isotropic_gaussian"; break;
    case InitialFamily::anisotropic_gaussian: f0f = "anisotropic_gaussian"; break;
    case InitialFamily::gyro_gaussian: f0f = "gyro_gaussian"; break;
  }
  out << "[scenario]\n";
  out << "field_family = " << ff << "\n";
  out << "field_e0 = " << vec3(cfg.fields.e0) << "\n";
  out << "field_b0 = " << vec3(cfg.fields.b0) << "\n";
  out << "field_amp_e = " << vec3(cfg.fields.amp_e) << "\n";
  out << "field_amp_b = " << vec3(cfg.fields.amp_b) << "\n";
  out << "field_k_e = " << mat3(cfg.fields.k_e) << "\n";
  out << "field_k_b = " << mat3(cfg.fields.k_b) << "\n";
  out << "field_phase_e = " << vec3(cfg.fields.phase_e) << "\n";
  out << "field_phase_b = " << vec3(cfg.fields.phase_b) << "\n";
  out << "field_env_radius = " << fmt(cfg.fields.env_radius) << "\n";
  out << "f0_family = " << f0f << "\n";
  out << "f0_center = " << vec3(cfg.f0.x0) << "\n";
  out << "f0_sigma_x = " << fmt(cfg.f0.sigma_x) << "\n";
  out << "f0_sigma_v = " << fmt(cfg.f0.sigma_v) << "\n";
  out << "f0_sig_x = " << vec3(cfg.f0.sig_x) << "\n";
  out << "f0_sig_v = " << vec3(cfg.f0.sig_v) << "\n";
  out << "f0_mod_amp = " << fmt(cfg.f0.mod_amp) << "\n";
  out << "f0_mod_k = " << cfg.f0.mod_k << "\n";
  out << "T = " << fmt(cfg.T) << "\n";
  out << "epsilon_list =";
  for (const double e : cfg.epsilon_list) out << " " << fmt(e);
  out << "\n";
  out << "\n[experiment]\n";
  out << "name = " << cfg.experiment << "\n";
  out << "cloud_log2 = " << cfg.cloud_log2 << "\n";
  out << "n_cyl_log2 = " << cfg.n_cyl_log2 << "\n";
  out << "n_alpha = " << cfg.n_alpha << "\n";
  out << "n_tau = " << cfg.n_tau << "\n";
  out << "n_sigma = " << cfg.n_sigma << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "cloud_x_center = " << vec3(cfg.cloud_x_center) << "\n";
  out << "cloud_x_sigma = " << vec3(cfg.cloud_x_sigma) << "\n";
  out << "cloud_v_sigma = " << vec3(cfg.cloud_v_sigma) << "\n";
  out << "v_perp_min = " << fmt(cfg.v_perp_min) << "\n";
  out << "v_perp_max = " << fmt(cfg.v_perp_max) << "\n";
  out << "\n[integrator]\n";
  out << "dt_max = " << fmt(cfg.integrator.dt_max) << "\n";
  out << "substeps_per_gyroperiod = " << cfg.integrator.substeps_per_gyroperiod << "\n";
  out << "method = "
      << (cfg.integrator.method == FlowMethod::strang_split_exact_rotation ? "strang" : "rk4")
      << "\n";
  out << "\n[gradient]\n";
  out << "method = "
      << (cfg.gradients.method == GradientMethod::analytic_when_available ? "analytic"
                                                                          : "central_fd")
      << "\n";
  out << "fd_step = " << fmt(cfg.gradients.fd_step) << "\n";
  out << "\n[output]\n";
  out << "dir = " << cfg.output.dir << "\n";
  out << "format = " << cfg.output.format << "\n";
  return out.str();
}

std::string config_hash(const ScenarioConfig& cfg) {
  const std::string s = serialize_config(cfg);
  std::uint64_t h = 1469598103934665603ull;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

CloudSpec scenario_cloud(const ScenarioConfig& cfg, CloudKind kind) {
  CloudSpec spec;
  spec.kind = kind;
  spec.size_log2 = kind == CloudKind::cylindrical ? cfg.n_cyl_log2 : cfg.cloud_log2;
  spec.seed = cfg.seed;
  spec.x_center = cfg.cloud_x_center;
  spec.x_sigma = cfg.cloud_x_sigma;
  spec.v_sigma = cfg.cloud_v_sigma;
  spec.v_perp_min = cfg.v_perp_min;
  spec.v_perp_max = cfg.v_perp_max;
  return spec;
}

}  // namespace gyroscale
