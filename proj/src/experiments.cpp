#include <gyroscale/experiments.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>

#include <gyroscale/cloud.hpp>
#include <gyroscale/corrector.hpp>
#include <gyroscale/decompose.hpp>
#include <gyroscale/flow.hpp>
#include <gyroscale/parallel.hpp>
#include <gyroscale/residuals.hpp>

namespace gyroscale {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct NormEst {
  double value = 0.0;
  double est = 0.0;
};

// Weighted L2 norm over the cloud with a half-sample error estimate: the
// first half of the low-discrepancy sequence is itself a valid (coarser)
// cloud, so the doubled half-sum probes the quadrature error.
template <typename Pt>
NormEst norm_est(const std::vector<Pt>& pts, const std::vector<double>& vals) {
  const int n = static_cast<int>(pts.size());
  std::vector<double> contrib(n);
  for (int i = 0; i < n; ++i) contrib[i] = pts[i].w * vals[i] * vals[i];
  const double full = std::sqrt(std::max(0.0, pairwise_sum(contrib.data(), n)));
  const double half = std::sqrt(std::max(0.0, 2.0 * pairwise_sum(contrib.data(), n / 2)));
  return {full, std::abs(half - full)};
}

void fit_loglog(const std::vector<double>& eps, const std::vector<double>& val, double& slope,
                double& resid) {
  const int n = static_cast<int>(eps.size());
  std::vector<double> lx(n), ly(n);
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    lx[i] = std::log(eps[i]);
    ly[i] = std::log(std::max(val[i], 1e-300));
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  slope = sxy / sxx;
  double ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = ly[i] - my - slope * (lx[i] - mx);
    ss += r * r;
  }
  resid = std::sqrt(ss / n);
}

std::string fmtg(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

void gate(ExperimentReport& rep, bool ok, const std::string& text) {
  rep.gate_lines.push_back(std::string(ok ? "[ok]   " : "[FAIL] ") + text);
  if (!ok) rep.pass = false;
}

// Trend gates compare norms across epsilon; at a whole-period freeze a norm
// sits at accumulated roundoff, and ranking noise against noise would fail
// spuriously.  The floor is far below any physical trend the gates certify.
constexpr double trend_floor = 1e-12;

}  // namespace

ExperimentReport experiment_two_scale_convergence(const ScenarioConfig& cfg, int threads) {
  const auto start = Clock::now();
  ExperimentReport rep;
  rep.experiment = "convergence";
  rep.hash = config_hash(cfg);
  rep.pass = true;

  const SampleCloud cloud = SampleCloud::generate(scenario_cloud(cfg, CloudKind::gauss_weighted));
  const auto& pts = cloud.points();
  const int n = cloud.size();

  std::vector<double> d_norms;
  for (const double eps : cfg.epsilon_list) {
    const auto t_eps = Clock::now();
    std::vector<double> diff(n);
    parallel_for(
        n,
        [&](int i) {
          const double f =
              eval_f_eps(cfg.T, pts[i].x, pts[i].v, eps, cfg.fields, cfg.f0, cfg.integrator);
          const Vec3 u = ucar(TauPhase(cfg.T / eps), pts[i].v);
          const double g = eval_G(cfg.T, pts[i].x, u, cfg.fields, cfg.f0, cfg.integrator);
          diff[i] = f - g;
        },
        threads);
    const NormEst ne = norm_est(pts, diff);
    d_norms.push_back(ne.value);
    rep.rows.push_back({rep.experiment, eps, "d_norm", ne.value, ne.est, ms_since(t_eps)});
  }

  const bool degenerate =
      std::all_of(d_norms.begin(), d_norms.end(), [](double d) { return d <= 1e-8; });
  if (degenerate) {
    rep.degenerate_exact = true;
    gate(rep, true, "all d_norm <= 1e-08: degenerate-exact, slope gate not applicable");
  } else if (d_norms.size() >= 3) {
    fit_loglog(cfg.epsilon_list, d_norms, rep.slope, rep.fit_residual);
    rep.slope_fitted = true;
    gate(rep, rep.slope >= 0.9, "log-log slope " + fmtg(rep.slope) + " >= 0.9");
    gate(rep, rep.fit_residual <= 0.1, "slope fit residual " + fmtg(rep.fit_residual) + " <= 0.1");
  } else {
    // A slope is only reported from three or more epsilon points; a shorter
    // non-degenerate sweep cannot certify the trend.
    gate(rep, false, "fewer than 3 epsilon points: slope cannot be certified");
  }
  rep.total_wall_ms = ms_since(start);
  return rep;
}

ExperimentReport experiment_first_order(const ScenarioConfig& cfg, int threads) {
  const auto start = Clock::now();
  ExperimentReport rep;
  rep.experiment = "first_order";
  rep.hash = config_hash(cfg);
  rep.pass = true;

  const SampleCloud cloud = SampleCloud::generate(scenario_cloud(cfg, CloudKind::gauss_weighted));
  const auto& pts = cloud.points();
  const int n = cloud.size();
  TwoScaleSpec tspec;
  tspec.n_sigma = cfg.n_sigma;

  std::vector<double> h_norms;
  double flat_max = 0.0;
  int freeze_warns = 0;
  for (const double eps : cfg.epsilon_list) {
    const auto t_eps = Clock::now();
    const RhoField field(eps, cfg.fields, cfg.f0, cfg.integrator, cfg.gradients);
    std::vector<double> rho(n), g1(n), h(n), lker(n), drift(n);
    parallel_for(
        n,
        [&](int i) {
          const TwoScaleRecord rec = two_scale_decompose(field, cfg.T, pts[i].x, pts[i].v, tspec);
          rho[i] = rec.rho_val;
          g1[i] = rec.g1_val;
          h[i] = rec.h_val;
          // The drift over one period is expected O(eps); warn only when it
          // rivals the signal itself, which means the window is not frozen.
          const bool pathological = rec.freeze_drift > 0.25 * (1.0 + std::abs(rec.rho_val));
          drift[i] = pathological ? -rec.freeze_drift : rec.freeze_drift;
          // Invariant component of the raw corrector, measured by the period
          // filter along the co-rotating fiber (exact for its trig degree).
          const Vec3 u = ucar(TauPhase(cfg.T / eps), pts[i].v);
          const CorrectorContext ctx =
              make_corrector_context(cfg.T, pts[i].x, u, cfg.fields, cfg.f0, cfg.integrator,
                                     cfg.gradients);
          double acc = 0.0;
          const int nk = 8;
          for (int j = 0; j < nk; ++j) {
            const double tau = static_cast<double>(j) / nk;
            acc += corrector_l(tau, ucar_inv(tau, u), ctx);
          }
          lker[i] = acc / nk;
        },
        threads);
    const double wall = ms_since(t_eps);
    const NormEst rho_n = norm_est(pts, rho);
    const NormEst g1_n = norm_est(pts, g1);
    const NormEst h_n = norm_est(pts, h);
    const NormEst lk_n = norm_est(pts, lker);
    double drift_max = 0.0;
    for (int i = 0; i < n; ++i) {
      if (drift[i] < 0.0) ++freeze_warns;
      drift_max = std::max(drift_max, std::abs(drift[i]));
    }
    h_norms.push_back(h_n.value);
    flat_max = std::max({flat_max, rho_n.value, g1_n.value, h_n.value});
    rep.rows.push_back({rep.experiment, eps, "rho_norm", rho_n.value, rho_n.est, wall});
    rep.rows.push_back({rep.experiment, eps, "g1_norm", g1_n.value, g1_n.est, wall});
    rep.rows.push_back({rep.experiment, eps, "h_norm", h_n.value, h_n.est, wall});
    rep.rows.push_back({rep.experiment, eps, "l_ker_norm", lk_n.value, lk_n.est, wall});
    rep.rows.push_back({rep.experiment, eps, "freeze_drift_max", drift_max, 0.0, wall});
  }

  if (freeze_warns > 0)
    rep.warnings.push_back("window freezing drift rivals the signal at " +
                           std::to_string(freeze_warns) + " samples");
  if (flat_max <= 1e-6) {
    rep.degenerate_exact = true;
    gate(rep, true, "all remainder norms <= 1e-06: trivially flat, trend gate not applicable");
  } else {
    for (std::size_t i = 1; i < h_norms.size(); ++i) {
      const bool ok = h_norms[i] <= 1.05 * h_norms[i - 1];
      gate(rep, ok,
           "h_norm(eps=" + fmtg(cfg.epsilon_list[i]) + ") = " + fmtg(h_norms[i]) +
               " <= 1.05 * " + fmtg(h_norms[i - 1]));
    }
  }
  rep.total_wall_ms = ms_since(start);
  return rep;
}

ExperimentReport experiment_classical_mm(const ScenarioConfig& cfg, int threads) {
  const auto start = Clock::now();
  ExperimentReport rep;
  rep.experiment = "classical";
  rep.hash = config_hash(cfg);
  rep.pass = true;

  const SampleCloud cloud = SampleCloud::generate(scenario_cloud(cfg, CloudKind::cylindrical));
  const auto& pts = cloud.cyl_points();
  const int n = cloud.size();
  const double times[3] = {0.0, cfg.T / 2.0, cfg.T};
  const char* tags[3] = {"t0", "thalf", "tfull"};

  std::vector<double> m1_full, n_full;  // t = T trends across epsilon
  double fluct_max = 0.0;
  bool m1_zero_ok = true;
  std::string m1_zero_text;
  for (const double eps : cfg.epsilon_list) {
    for (int ti = 0; ti < 3; ++ti) {
      const auto t_block = Clock::now();
      std::vector<double> m1(n), nbar(n);
      parallel_for(
          n,
          [&](int i) {
            const ClassicalMMRecord rec =
                classical_decompose(times[ti], pts[i].x, pts[i].v_par, pts[i].v_perp, eps,
                                    cfg.fields, cfg.f0, cfg.n_alpha, cfg.integrator);
            m1[i] = rec.m1_val;
            nbar[i] = std::sqrt(rec.n_prof.values().squaredNorm() / rec.n_prof.size());
          },
          threads);
      const double wall = ms_since(t_block);
      const NormEst m1_n = norm_est(pts, m1);
      const NormEst n_n = norm_est(pts, nbar);
      fluct_max = std::max({fluct_max, m1_n.value, n_n.value});
      if (ti == 0 && m1_n.value > 1e-12) {
        m1_zero_ok = false;
        m1_zero_text = "m1_norm(t=0, eps=" + fmtg(eps) + ") = " + fmtg(m1_n.value);
      }
      if (ti == 2) {
        m1_full.push_back(m1_n.value);
        n_full.push_back(n_n.value);
      }
      rep.rows.push_back({rep.experiment, eps, std::string("m1_norm_") + tags[ti], m1_n.value,
                          m1_n.est, wall});
      rep.rows.push_back(
          {rep.experiment, eps, std::string("n_norm_") + tags[ti], n_n.value, n_n.est, wall});
    }
  }

  gate(rep, m1_zero_ok,
       m1_zero_ok ? "m1_norm(t=0) <= 1e-12 for every epsilon" : m1_zero_text + " exceeds 1e-12");
  if (fluct_max <= 1e-8) {
    rep.degenerate_exact = true;
    gate(rep, true, "all fluctuation norms <= 1e-08: degenerate, trend gates not applicable");
  } else {
    for (std::size_t i = 1; i < m1_full.size(); ++i) {
      gate(rep, m1_full[i] <= 1.05 * m1_full[i - 1],
           "m1_norm(T, eps=" + fmtg(cfg.epsilon_list[i]) + ") = " + fmtg(m1_full[i]) +
               " <= 1.05 * " + fmtg(m1_full[i - 1]));
      gate(rep, n_full[i] <= 1.05 * n_full[i - 1],
           "n_norm(T, eps=" + fmtg(cfg.epsilon_list[i]) + ") = " + fmtg(n_full[i]) +
               " <= 1.05 * " + fmtg(n_full[i - 1]));
    }
  }

  // Weak-form residual at the middle epsilon, reported but not gated.
  const double mid = cfg.epsilon_list[cfg.epsilon_list.size() / 2];
  const auto t_res = Clock::now();
  ClassicalResidualSpec rspec;
  rspec.n_alpha = cfg.n_alpha;
  rspec.seed = cfg.seed;
  rspec.t_lo = std::min(rspec.t_lo, cfg.T / 2.0);
  rspec.t_hi = cfg.T;
  rspec.threads = threads;
  const ClassicalResidualReport rr =
      classical_weak_residual(mid, cfg.fields, cfg.f0, cfg.integrator, rspec);
  rep.rows.push_back(
      {rep.experiment, mid, "weak_residual", rr.residual, rr.fd_estimate, ms_since(t_res)});

  rep.total_wall_ms = ms_since(start);
  return rep;
}

ExperimentReport run_experiment(const ScenarioConfig& cfg, int threads) {
  if (cfg.experiment == "convergence") return experiment_two_scale_convergence(cfg, threads);
  if (cfg.experiment == "first_order") return experiment_first_order(cfg, threads);
  return experiment_classical_mm(cfg, threads);
}

}  // namespace gyroscale
