// End-to-end gate suite: one verdict line per published criterion, every
// tolerance pinned in code, nonzero exit when any line fails.

#include <fcntl.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gyroscale/cli.hpp>
#include <gyroscale/decompose.hpp>
#include <gyroscale/report.hpp>
#include <gyroscale/residuals.hpp>
#include <gyroscale/tau_calculus.hpp>

using namespace gyroscale;
namespace fs = std::filesystem;

namespace {

double golden(int i, double lo = 0.0, double hi = 1.0) {
  const double t = std::fmod(0.5 + 0.6180339887498949 * i, 1.0);
  return lo + (hi - lo) * t;
}

Vec3 golden_vec(int i, double scale = 2.0) {
  return Vec3(golden(3 * i + 1, -scale, scale), golden(3 * i + 2, -scale, scale),
              golden(3 * i + 3, -scale, scale));
}

std::string fmtg(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

InitialDistribution gyro_f0(double amp = 0.5, int k = 1) {
  InitialDistribution f0;
  f0.family = InitialFamily::gyro_gaussian;
  f0.mod_amp = amp;
  f0.mod_k = k;
  return f0;
}

InitialDistribution fiber_f0() {
  InitialDistribution f0;
  f0.family = InitialFamily::anisotropic_gaussian;
  f0.sig_x = Vec3(1.0, 1e12, 1e12);
  return f0;
}

FieldConfig smooth_fields() {
  FieldConfig f;
  f.family = FieldFamily::smooth_bounded;
  f.amp_e = Vec3(0.3, 0.25, 0.2);
  f.k_e << 0.7, 0.4, 0.2, 0.3, 0.8, 0.5, 0.2, 0.5, 0.9;
  f.phase_e = Vec3(0.1, 1.3, 2.1);
  f.amp_b = Vec3(0.15, 0.2, 0.1);
  f.k_b << 0.5, 0.2, 0.6, 0.4, 0.3, 0.7, 0.6, 0.1, 0.2;
  f.phase_b = Vec3(0.7, 0.2, 1.9);
  return f;
}

FieldConfig parallel_field(double e1, double b1 = 0.0) {
  FieldConfig f;
  f.family = FieldFamily::parallel_uniform;
  f.e0 = Vec3(e1, 0.0, 0.0);
  f.b0 = Vec3(b1, 0.0, 0.0);
  return f;
}

// Closed-form free backward map: unwind the gyration, subtract its drift.
PhasePoint free_backward(double t, const PhasePoint& p, double eps) {
  const double theta = two_pi * t / eps;
  const double c = std::cos(theta), s = std::sin(theta);
  const double w = eps / two_pi;
  Mat3 d, rot;
  d << t, 0, 0, 0, w * s, -w * (1 - c), 0, w * (1 - c), w * s;
  rot << 1, 0, 0, 0, c, -s, 0, s, c;
  return {p.x - d * p.v, rot * p.v};
}

PhasePoint forward_fine(const PhasePoint& start, double t0, double t1, double eps,
                        const FieldConfig& fields, int steps) {
  PhasePoint p = start;
  const double delta = (t1 - t0) / steps;
  const Vec3 bfast = FieldConfig::M() / eps;
  auto rhs = [&](double s, const PhasePoint& q, Vec3& dx, Vec3& dv) {
    dx = q.v;
    dv = fields.E(s, q.x) + q.v.cross(fields.B(s, q.x) + bfast);
  };
  for (int i = 0; i < steps; ++i) {
    const double s = t0 + i * delta;
    Vec3 k1x, k1v, k2x, k2v, k3x, k3v, k4x, k4v;
    rhs(s, p, k1x, k1v);
    rhs(s + delta / 2, {p.x + delta / 2 * k1x, p.v + delta / 2 * k1v}, k2x, k2v);
    rhs(s + delta / 2, {p.x + delta / 2 * k2x, p.v + delta / 2 * k2v}, k3x, k3v);
    rhs(s + delta, {p.x + delta * k3x, p.v + delta * k3v}, k4x, k4v);
    p.x += delta / 6 * (k1x + 2 * k2x + 2 * k3x + k4x);
    p.v += delta / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
  }
  return p;
}

fs::path find_configs() {
  const fs::path here = fs::path(__FILE__).parent_path().parent_path() / "configs";
  for (const fs::path cand : {here, fs::path("configs"), fs::path("../configs")})
    if (fs::exists(cand / "convergence.toml")) return cand;
  return {};
}

// ---- criteria ----

bool criterion_geometry(std::string& detail) {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> angle(-2.0, 2.0), comp(-2.0, 2.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double tau = angle(rng);
    const Mat3 r = rotation(tau);
    worst = std::max(worst, (rotation(tau + 1.0) - r).cwiseAbs().maxCoeff());
    worst = std::max(worst, (r * r.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff());
    worst = std::max(worst, (rotation(-tau) - r.transpose()).cwiseAbs().maxCoeff());
    worst = std::max(worst, std::abs(r.determinant() - 1.0));
    worst = std::max(worst, ((r * Vec3::UnitX()) - Vec3::UnitX()).cwiseAbs().maxCoeff());
  }
  for (int i = 0; i < 100; ++i) {
    const double tau = angle(rng);
    const Vec3 v(comp(rng), comp(rng), comp(rng));
    const Vec3 u = ucar(tau, v);
    worst = std::max(worst, std::abs(u.norm() - v.norm()));
    worst = std::max(worst, (ucar_inv(tau, u) - v).cwiseAbs().maxCoeff());
    const Vec3 axis(v(0), 0.0, 0.0);
    worst = std::max(worst, (ucar(tau, axis) - axis).cwiseAbs().maxCoeff());
  }
  detail = "max deviation " + fmtg(worst);
  return worst <= 1e-12;
}

bool criterion_alpha_calculus(std::string& detail) {
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double c1 = golden(i, 0.3, 1.0), c2 = golden(i + 7, 0.1, 0.5);
    const double ph1 = golden(i + 19, 0.0, two_pi), ph2 = golden(i + 31, 0.0, two_pi);
    const PeriodicProfile q = PeriodicProfile::sample(Period::alpha, 64, [&](double a) {
      return std::exp(c1 * std::sin(a + ph1)) + c2 * std::cos(2.0 * a + ph2);
    });

    const double mean = alpha_project(q);
    const PeriodicProfile fluct = alpha_fluct(q);
    // projecting the projection changes nothing; the fluctuation is mean-free
    const PeriodicProfile flat =
        PeriodicProfile(Period::alpha, Eigen::VectorXd::Constant(64, mean));
    worst = std::max(worst, std::abs(alpha_project(flat) - mean));
    worst = std::max(worst, std::abs(alpha_project(fluct)));
    // complementarity holds nodewise
    for (int k = 0; k < q.size(); ++k)
      worst = std::max(worst, std::abs(mean + fluct(k) - q(k)));
    // the antiderivative differentiates back to the fluctuation
    const PeriodicProfile anti = alpha_antiderivative(fluct);
    const TrigSeries series = TrigSeries::analyze(anti.values(), two_pi);
    worst = std::max(worst, std::abs(alpha_project(anti)));
    for (int k = 0; k < q.size(); ++k)
      worst = std::max(worst, std::abs(series.derivative(anti.node(k)) - fluct(k)));
  }
  detail = "max deviation " + fmtg(worst);
  return worst <= 1e-10;
}

bool criterion_tau_calculus(std::string& detail) {
  auto invariant = [](const Vec3& u) {
    return 1.0 + 0.3 * u(0) + 0.2 * (u(1) * u(1) + u(2) * u(2)) + 0.1 * std::sin(u(0));
  };
  const TauField g = [&](double tau, const Vec3& v) {
    return invariant(ucar(tau, v)) +
           std::cos(two_pi * tau + 0.4) * (0.5 + 0.2 * v.squaredNorm() + 0.3 * v(0)) +
           0.1 * std::sin(two_pi * tau) * (v(1) * v(1) - v(2) * v(2));
  };

  double worst_ker = 0.0, worst_im = 0.0, worst_eq = 0.0, worst_link = 0.0;
  const int n_tau = 32;
  for (int i = 0; i < 10; ++i) {
    const double tau = golden(i + 3);
    const Vec3 v = golden_vec(i + 11, 1.5);
    const double proj = tau_ker_project(g, tau, v, n_tau);
    worst_ker = std::max(worst_ker, std::abs(proj - invariant(ucar(tau, v))));

    // idempotence and annihilation of the complement
    const TauField projected = [&](double s, const Vec3& w) {
      return tau_ker_project(g, s, w, n_tau);
    };
    const TauField im = [&](double s, const Vec3& w) { return tau_im_part(g, s, w, n_tau); };
    worst_ker = std::max(worst_ker, std::abs(tau_ker_project(projected, tau, v, n_tau) - proj));
    worst_im = std::max(worst_im, std::abs(tau_ker_project(im, tau, v, n_tau)));
  }

  // membership: the filtered value reads its arguments through the invariant
  {
    const Vec3 u0(0.6, 1.1, -0.4);
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < 8; ++i) {
      const double tau = golden(i + 50);
      const double k = tau_ker_project(g, tau, ucar_inv(tau, u0), n_tau);
      lo = std::min(lo, k);
      hi = std::max(hi, k);
    }
    worst_ker = std::max(worst_ker, hi - lo);
  }

  // the two independent filter realizations agree on twenty profiles
  for (int i = 0; i < 20; ++i) {
    const Vec3 a = golden_vec(i + 200, 1.0);
    const double c = golden(i + 77, 0.2, 1.0), ph = golden(i + 91, 0.0, two_pi);
    const TauField gi = [&](double tau, const Vec3& v) {
      return ucar(tau, v).dot(a) + c * std::cos(two_pi * tau + ph) * (1.0 + 0.4 * v(0));
    };
    for (int j = 0; j < 3; ++j) {
      const double tau = golden(7 * i + j + 400);
      const Vec3 v = golden_vec(5 * i + j + 300, 1.5);
      worst_eq = std::max(worst_eq, std::abs(tau_ker_project(gi, tau, v, n_tau) -
                                             tau_ker_project_corotating(gi, tau, v, n_tau)));
    }
  }

  // fast-phase integration respects the split, nodewise in the gyrophase
  const TauXVField f_ker = [&](double tau, const Vec3& x, const Vec3& v) {
    return std::exp(-0.25 * x.squaredNorm()) * invariant(ucar(tau, v));
  };
  const TauXVField h_im = [](double tau, const Vec3& x, const Vec3& v) {
    return std::cos(two_pi * tau + 0.3) * (0.7 + 0.2 * v.squaredNorm() + 0.3 * v(0) + x(1)) +
           0.1 * std::sin(two_pi * tau) * (v(1) * v(1) - v(2) * v(2));
  };
  for (int i = 0; i < 3; ++i) {
    const auto [ker_fluct, im_mean] = tau_integrate_respects_split(
        f_ker, h_im, golden_vec(i + 20, 0.8), golden(i + 33, -1.0, 1.0),
        golden(i + 44, 0.4, 1.6), 64, 32);
    worst_link = std::max({worst_link, ker_fluct, im_mean});
  }

  detail = "ker " + fmtg(worst_ker) + ", im " + fmtg(worst_im) + ", eq " + fmtg(worst_eq) +
           ", link " + fmtg(worst_link);
  return worst_ker <= 1e-8 && worst_im <= 1e-10 && worst_eq <= 1e-10 && worst_link <= 1e-8;
}

bool criterion_dynamics(std::string& detail) {
  const FieldConfig zero;
  const IntegratorSpec strang;
  double worst_free = 0.0;
  for (const double eps : {0.2, 0.05})
    for (const double t : {0.13, 0.4})
      for (int i = 0; i < 20; ++i) {
        const PhasePoint p{golden_vec(i, 1.0), golden_vec(i + 100, 2.0)};
        const PhasePoint exact = free_backward(t, p, eps);
        const PhasePoint got = flow_full_backward(t, p, eps, zero, strang);
        worst_free = std::max(worst_free, (got.x - exact.x).cwiseAbs().maxCoeff());
        worst_free = std::max(worst_free, (got.v - exact.v).cwiseAbs().maxCoeff());
      }

  double worst_par = 0.0;
  {
    const FieldConfig fields = parallel_field(0.3);
    const double eps = 0.1, t = 0.4;
    for (int i = 0; i < 10; ++i) {
      const PhasePoint p{golden_vec(i, 1.0), golden_vec(i + 50, 1.5)};
      PhasePoint exact = free_backward(t, p, eps);
      exact.v(0) = p.v(0) - 0.3 * t;
      exact.x(0) = p.x(0) - p.v(0) * t + 0.15 * t * t;
      const PhasePoint got = flow_full_backward(t, p, eps, fields, strang);
      worst_par = std::max(worst_par, (got.x - exact.x).cwiseAbs().maxCoeff());
      worst_par = std::max(worst_par, (got.v - exact.v).cwiseAbs().maxCoeff());
    }
  }

  const FieldConfig smooth = smooth_fields();
  IntegratorSpec ref;
  ref.method = FlowMethod::rk4_reference;
  ref.substeps_per_gyroperiod = 2000;
  double worst_brute = 0.0;
  {
    IntegratorSpec fine = strang;
    fine.substeps_per_gyroperiod = 1024;
    for (int i = 0; i < 5; ++i) {
      const PhasePoint p{golden_vec(i, 0.8), golden_vec(i + 40, 1.5)};
      const PhasePoint a = flow_full_backward(0.4, p, 0.1, smooth, fine);
      const PhasePoint b = flow_full_backward(0.4, p, 0.1, smooth, ref);
      worst_brute = std::max(
          worst_brute, std::sqrt((a.x - b.x).squaredNorm() + (a.v - b.v).squaredNorm()));
    }
  }

  double sum16 = 0.0, sum32 = 0.0;
  for (int i = 0; i < 3; ++i) {
    const PhasePoint p{golden_vec(i, 0.8), golden_vec(i + 40, 1.5)};
    const PhasePoint fine = flow_full_backward(0.4, p, 0.1, smooth, ref);
    IntegratorSpec s = strang;
    for (int sub : {16, 32}) {
      s.substeps_per_gyroperiod = sub;
      const PhasePoint got = flow_full_backward(0.4, p, 0.1, smooth, s);
      const double e2 = (got.x - fine.x).squaredNorm() + (got.v - fine.v).squaredNorm();
      (sub == 16 ? sum16 : sum32) += e2;
    }
  }
  const double order_ratio = std::sqrt(sum16 / sum32);

  const InitialDistribution f0 = gyro_f0();
  double worst_ride = 0.0;
  for (int i = 0; i < 20; ++i) {
    const PhasePoint start{golden_vec(i, 0.8), golden_vec(i + 300, 1.5)};
    const PhasePoint end = forward_fine(start, 0.0, 0.4, 0.1, smooth, 8000);
    const double datum = f0.value(start.x, start.v);
    worst_ride =
        std::max(worst_ride, std::abs(eval_f_eps(0.4, end.x, end.v, 0.1, smooth, f0, ref) - datum));
  }

  detail = "free " + fmtg(worst_free) + ", parallel " + fmtg(worst_par) + ", brute " +
           fmtg(worst_brute) + ", order ratio " + fmtg(order_ratio) + ", transport " +
           fmtg(worst_ride);
  return worst_free <= 1e-12 && worst_par <= 1e-8 && worst_brute <= 1e-8 &&
         order_ratio >= 3.5 && worst_ride <= 1e-8;
}

bool criterion_convergence(const fs::path& configs, std::string& detail) {
  if (configs.empty()) {
    detail = "configs directory not found";
    return false;
  }
  const ScenarioConfig cfg = load_config((configs / "convergence.toml").string());
  const ExperimentReport rep = run_experiment(cfg, 4);
  detail = "slope " + fmtg(rep.slope) + ", fit residual " + fmtg(rep.fit_residual);
  return rep.pass && rep.slope_fitted && rep.slope >= 0.9 && rep.fit_residual <= 0.1;
}

bool criterion_first_order(const fs::path& configs, std::string& detail) {
  if (configs.empty()) {
    detail = "configs directory not found";
    return false;
  }
  const ScenarioConfig cfg = load_config((configs / "first_order.toml").string());
  const ExperimentReport rep = run_experiment(cfg, 4);
  bool trend_ok = rep.pass;
  double h_last = 0.0;
  for (const auto& row : rep.rows)
    if (row.metric == "h_norm") h_last = row.value;

  // manufactured slow drift: the filter recovers both planted parts to 5%
  const double eps = 0.01, t_star = 0.3;
  auto plant = [&](double t, const Vec3& x, const Vec3& v) {
    const Vec3 u = ucar(TauPhase(t / eps), v);
    const double macro = (1.0 + 0.2 * t) * std::exp(-0.5 * x.squaredNorm()) *
                         (1.0 + 0.3 * u(0) + 0.2 * (u(1) * u(1) + u(2) * u(2)));
    const double psi = 0.4 + v(0) * v(0) + 0.5 * (v(1) * v(1) + v(2) * v(2));
    return macro + std::cos(two_pi * (t / eps) + 0.7) * psi;
  };
  double worst_rel = 0.0;
  for (int i = 0; i < 10; ++i) {
    const Vec3 x = golden_vec(i + 20, 0.8), v = golden_vec(i + 90, 1.4);
    const Vec3 u = ucar(TauPhase(t_star / eps), v);
    const double want_macro = (1.0 + 0.2 * t_star) * std::exp(-0.5 * x.squaredNorm()) *
                              (1.0 + 0.3 * u(0) + 0.2 * (u(1) * u(1) + u(2) * u(2)));
    const double want_fluct =
        std::cos(two_pi * (t_star / eps) + 0.7) *
        (0.4 + v(0) * v(0) + 0.5 * (v(1) * v(1) + v(2) * v(2)));
    const double got_macro = window_mean(plant, t_star, x, v, eps, 16);
    const double got_fluct = plant(t_star, x, v) - got_macro;
    worst_rel = std::max(worst_rel, std::abs(got_macro - want_macro) / std::abs(want_macro));
    worst_rel = std::max(worst_rel, std::abs(got_fluct - want_fluct) / std::abs(want_fluct));
  }

  // the split rebuilds the solution value at every sampled point
  const RhoField field(0.1, smooth_fields(), gyro_f0());
  double worst_rec = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Vec3 x = golden_vec(i, 0.8), v = golden_vec(i + 400, 1.4);
    const auto rec = two_scale_decompose(field, 0.33, x, v);
    const double rebuilt = rec.g_val + 0.1 * (rec.g1_val + rec.l_val + rec.h_val);
    worst_rec = std::max(worst_rec,
                         std::abs(rec.f_val - rebuilt) / (1.0 + std::abs(rec.f_val)));
  }

  detail = "h trend " + std::string(trend_ok ? "ok" : "VIOLATED") + " (last " + fmtg(h_last) +
           "), extraction " + fmtg(worst_rel) + ", rebuild " + fmtg(worst_rec);
  return trend_ok && worst_rel <= 0.05 && worst_rec <= 1e-12;
}

bool criterion_classical(const fs::path& configs, std::string& detail) {
  if (configs.empty()) {
    detail = "configs directory not found";
    return false;
  }
  const ScenarioConfig cfg = load_config((configs / "classical.toml").string());
  const ExperimentReport rep = run_experiment(cfg, 4);
  const bool sweep_ok = rep.pass;

  // at time zero the scalar excess vanishes and the fluctuation antiderivative
  // matches the closed form of the planted modulation, up to its free constant
  double worst_m1 = 0.0, worst_p = 0.0;
  const InitialDistribution iso;
  for (const auto& [amp, k] : {std::pair<double, int>{0.5, 1}, {0.4, 2}}) {
    const InitialDistribution f0 = gyro_f0(amp, k);
    for (int i = 0; i < 5; ++i) {
      const Vec3 x = golden_vec(i + 5, 0.8);
      const double v_par = golden(i + 60, -1.0, 1.0), v_perp = golden(i + 70, 0.4, 1.6);
      const auto rec = classical_decompose(0.0, x, v_par, v_perp, 0.08, cfg.fields, f0, 64);
      worst_m1 = std::max(worst_m1, std::abs(rec.m1_val));
      const double base = iso.value(x, cyl_to_cart(v_par, v_perp, 0.0));
      for (int j = 0; j < 64; ++j) {
        const double alpha = rec.p_prof.node(j);
        worst_p = std::max(
            worst_p, std::abs(rec.p_prof(j) - amp / k * base * std::sin(k * alpha)));
      }
    }
  }

  // the weak-form residual drops under stencil and node refinement
  ClassicalResidualSpec coarse;
  coarse.threads = 4;
  const FieldConfig pf = parallel_field(0.3, 0.4);
  const double res_c = classical_weak_residual(0.05, pf, gyro_f0(), {}, coarse).residual;
  ClassicalResidualSpec fine = coarse;
  fine.n_alpha = 64;
  fine.h_t /= 2;
  fine.h_x /= 2;
  fine.h_v /= 2;
  const double res_f = classical_weak_residual(0.05, pf, gyro_f0(), {}, fine).residual;
  const double ratio = res_f > 0.0 ? res_c / res_f : 1e300;

  detail = "sweep " + std::string(sweep_ok ? "ok" : "VIOLATED") + ", m1(0) " + fmtg(worst_m1) +
           ", p(0) " + fmtg(worst_p) + ", refinement x" + fmtg(ratio);
  return sweep_ok && worst_m1 <= 1e-12 && worst_p <= 1e-10 && ratio >= 2.0;
}

bool criterion_macro_residual(std::string& detail) {
  const auto dict = test_function_dictionary(3, 0.45, 0.15);

  MacroResidualSpec spec;
  spec.n_t = 16;
  spec.cloud.size_log2 = 10;
  spec.threads = 4;
  const RhoField trivial(0.1, FieldConfig{}, fiber_f0());
  const auto rep = macro_weak_residual(trivial, dict[0], spec);
  const bool trivial_ok = std::abs(rep.residual) <= rep.est_error && rep.est_error <= 1e-10;

  const RhoField field(0.1, FieldConfig{}, gyro_f0());
  MacroResidualSpec pspec;
  pspec.n_t = 8;
  pspec.cloud.size_log2 = 10;
  pspec.threads = 4;
  const double base = macro_weak_residual(field, dict[0], pspec).residual;
  pspec.g1_perturb = 1e-3;
  const double small = macro_weak_residual(field, dict[0], pspec).residual;
  pspec.g1_perturb = 1e-2;
  const double large = macro_weak_residual(field, dict[0], pspec).residual;
  const double exponent = std::log10(std::abs(large - base) / std::abs(small - base));

  detail = "trivial " + fmtg(rep.residual) + " within " + fmtg(rep.est_error) + ", exponent " +
           fmtg(exponent);
  return trivial_ok && exponent >= 0.9 && exponent <= 1.1;
}

bool criterion_determinism(std::string& detail) {
  ScenarioConfig cfg;
  cfg.f0.family = InitialFamily::gyro_gaussian;
  cfg.T = 0.3;
  cfg.epsilon_list = {0.2, 0.1, 0.05};
  cfg.cloud_log2 = 8;

  const ExperimentReport r1 = run_experiment(cfg, 1);
  const ExperimentReport r8 = run_experiment(cfg, 8);
  bool rows_ok = r1.rows.size() == r8.rows.size() && r1.slope == r8.slope &&
                 r1.fit_residual == r8.fit_residual;
  for (std::size_t i = 0; rows_ok && i < r1.rows.size(); ++i)
    rows_ok = r1.rows[i].metric == r8.rows[i].metric && r1.rows[i].value == r8.rows[i].value &&
              r1.rows[i].est_error == r8.rows[i].est_error;

  const std::string text = serialize_config(cfg);
  const ScenarioConfig back = parse_config(text, "roundtrip");
  const bool rt_ok = serialize_config(back) == text && config_hash(back) == config_hash(cfg);

  // exit codes: missing file, invalid file, failed gate, passing run; the
  // driver's own chatter (expected error diagnostics included) is muted so it
  // cannot be mistaken for a verdict of this suite
  const fs::path root = fs::temp_directory_path() / "gyroscale_acceptance";
  fs::create_directories(root);
  auto cli = [](std::vector<std::string> args) {
    args.insert(args.begin(), "gyroscale");
    std::vector<char*> argv;
    argv.reserve(args.size());
    for (auto& s : args) argv.push_back(s.data());
    std::fflush(stdout);
    std::fflush(stderr);
    const int saved_out = dup(1), saved_err = dup(2);
    const int devnull = open("/dev/null", O_WRONLY);
    dup2(devnull, 1);
    dup2(devnull, 2);
    const int code = run_cli(static_cast<int>(argv.size()), argv.data());
    std::fflush(stdout);
    std::fflush(stderr);
    dup2(saved_out, 1);
    dup2(saved_err, 2);
    close(devnull);
    close(saved_out);
    close(saved_err);
    return code;
  };
  const int code_missing = cli({"run", (root / "absent.toml").string()});
  std::ofstream(root / "invalid.toml") << "[scenario]\nbogus_key = 1\n";
  const int code_invalid = cli({"run", (root / "invalid.toml").string()});

  ScenarioConfig gate_cfg = cfg;
  gate_cfg.epsilon_list = {0.2, 0.1};
  gate_cfg.cloud_log2 = 6;
  gate_cfg.output.dir = (root / "out_gate").string();
  std::ofstream(root / "gate.toml") << serialize_config(gate_cfg);
  const int code_gate = cli({"run", (root / "gate.toml").string(), "--threads", "2"});

  ScenarioConfig ok_cfg;
  ok_cfg.T = 0.5;
  ok_cfg.epsilon_list = {0.125, 0.05, 0.025};
  ok_cfg.cloud_log2 = 8;
  ok_cfg.output.dir = (root / "out_ok").string();
  std::ofstream(root / "ok.toml") << serialize_config(ok_cfg);
  const int code_ok = cli({"run", (root / "ok.toml").string(), "--threads", "2"});

  detail = "rows " + std::string(rows_ok ? "bit-identical" : "DIFFER") + ", round-trip " +
           (rt_ok ? "stable" : "UNSTABLE") + ", exit codes " + std::to_string(code_missing) +
           "/" + std::to_string(code_invalid) + "/" + std::to_string(code_gate) + "/" +
           std::to_string(code_ok);
  return rows_ok && rt_ok && code_missing == 2 && code_invalid == 2 && code_gate == 1 &&
         code_ok == 0;
}

struct Criterion {
  const char* name;
  double budget_s;
  std::function<bool(std::string&)> fn;
};

}  // namespace

int main() {
  const fs::path configs = find_configs();
  const Criterion criteria[] = {
      {"geometry identities and phase maps", 1.0, criterion_geometry},
      {"gyrophase projection calculus", 5.0, criterion_alpha_calculus},
      {"fast-phase projection calculus", 30.0, criterion_tau_calculus},
      {"characteristic dynamics oracles", 120.0, criterion_dynamics},
      {"two-scale convergence sweep", 300.0,
       [&](std::string& d) { return criterion_convergence(configs, d); }},
      {"first-order remainder split", 300.0,
       [&](std::string& d) { return criterion_first_order(configs, d); }},
      {"gyroaverage model sweep", 300.0,
       [&](std::string& d) { return criterion_classical(configs, d); }},
      {"filtered weak residual", 300.0, criterion_macro_residual},
      {"determinism and command line", 60.0, criterion_determinism},
  };

  bool all_ok = true;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_s) {
      ok = false;
      detail += " [over " + fmtg(c.budget_s) + " s budget]";
    }
    std::printf("[%s] %d. %-36s %s (%.1f s)\n", ok ? "PASS" : "FAIL", index, c.name,
                detail.c_str(), secs);
    std::fflush(stdout);
    all_ok = all_ok && ok;
  }
  std::printf("acceptance: %s\n", all_ok ? "PASS" : "FAIL");
  return all_ok ? 0 : 1;
}
