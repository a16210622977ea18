// Backward-characteristic dynamics: the stiff full flow (split integrator
// with exact gyration, plus a reference RK4), the slow limit flow, and the
// pointwise solution evaluators built on them.

#ifndef GYROSCALE_FLOW
#define GYROSCALE_FLOW

#include <gyroscale/fields.hpp>
#include <gyroscale/initial.hpp>

namespace gyroscale {

enum class FlowMethod { strang_split_exact_rotation, rk4_reference };

struct IntegratorSpec {
  double dt_max = 0.05;
  int substeps_per_gyroperiod = 16;
  FlowMethod method = FlowMethod::strang_split_exact_rotation;
};

struct PhasePoint {
  Vec3 x, v;
};

// Raised when an integration step produces a non-finite state.
class FlowError : public std::runtime_error {
 public:
  FlowError(int step, const std::string& what)
      : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

namespace detail {

// Drift matrix of the exact gyration-plus-transport map: int_0^delta r(w/eps) dw.
inline Mat3 gyration_drift(double delta, double eps) {
  const double theta = two_pi * delta / eps;
  const double c = std::cos(theta), s = std::sin(theta);
  Mat3 d;
  d << delta, 0.0, 0.0,
       0.0, eps / two_pi * s, -eps / two_pi * (1.0 - c),
       0.0, eps / two_pi * (1.0 - c), eps / two_pi * s;
  return d;
}

inline void check_finite(const PhasePoint& p, int step) {
  if (!p.x.allFinite() || !p.v.allFinite()) throw FlowError(step, "non-finite state");
}

}  // namespace detail

// Backward map of the full stiff flow: given the phase-space point at time t,
// returns the point at time 0 along the same characteristic.
//
// The split scheme alternates a half field kick (x frozen, midpoint rule) with
// the exactly solved gyration-plus-transport block; with zero fields the
// composed steps telescope to the exact free map for any step size. The
// reference method is classical RK4 on the unsplit stiff system.
inline PhasePoint flow_full_backward(double t, const PhasePoint& start, double eps,
                                     const FieldConfig& fields, const IntegratorSpec& spec) {
  if (t < 0.0) throw std::invalid_argument("flow_full_backward: negative time");
  PhasePoint p = start;
  if (t == 0.0) return p;
  const double target = std::min(spec.dt_max, eps / spec.substeps_per_gyroperiod);
  const int n = std::max(1, static_cast<int>(std::ceil(t / target)));
  const double delta = t / n;

  if (spec.method == FlowMethod::rk4_reference) {
    const Vec3 bfast = FieldConfig::M() / eps;
    auto rhs = [&](double s, const PhasePoint& q, Vec3& dx, Vec3& dv) {
      dx = -q.v;
      dv = -(fields.E(s, q.x) + q.v.cross(fields.B(s, q.x) + bfast));
    };
    for (int i = 0; i < n; ++i) {
      const double s = t - i * delta;
      Vec3 k1x, k1v, k2x, k2v, k3x, k3v, k4x, k4v;
      rhs(s, p, k1x, k1v);
      rhs(s - delta / 2, {p.x + delta / 2 * k1x, p.v + delta / 2 * k1v}, k2x, k2v);
      rhs(s - delta / 2, {p.x + delta / 2 * k2x, p.v + delta / 2 * k2v}, k3x, k3v);
      rhs(s - delta, {p.x + delta * k3x, p.v + delta * k3v}, k4x, k4v);
      p.x += delta / 6 * (k1x + 2 * k2x + 2 * k3x + k4x);
      p.v += delta / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
      detail::check_finite(p, i);
    }
    return p;
  }

  const Mat3 drift = detail::gyration_drift(delta, eps);
  const Mat3 rot = rotation(delta / eps);
  auto half_kick = [&](PhasePoint& q, double s) {
    const Vec3 e = fields.E(s, q.x), b = fields.B(s, q.x);
    if (b.isZero()) {
      q.v -= delta / 2 * e;
    } else {
      const Vec3 k1 = -(e + q.v.cross(b));
      const Vec3 vm = q.v + delta / 4 * k1;
      q.v += delta / 2 * (-(e + vm.cross(b)));
    }
  };
  for (int i = 0; i < n; ++i) {
    const double s = t - i * delta;
    half_kick(p, s);
    p.x -= drift * p.v;
    p.v = rot * p.v;
    half_kick(p, s - delta);
    detail::check_finite(p, i);
  }
  return p;
}

// Exact pointwise solution of the stiff problem: the initial datum carried
// along the backward characteristic.
inline double eval_f_eps(double t, const Vec3& x, const Vec3& v, double eps,
                         const FieldConfig& fields, const InitialDistribution& f0,
                         const IntegratorSpec& spec) {
  const PhasePoint foot = flow_full_backward(t, {x, v}, eps, fields, spec);
  return f0.value(foot.x, foot.v);
}

namespace detail {

// Backward map of the slow limit flow in (x, u): transport along the axis and
// the parallel-field force, integrated with classical RK4 (non-stiff).
inline PhasePoint limit_flow_backward(double t, const PhasePoint& start, const FieldConfig& fields,
                                      const IntegratorSpec& spec) {
  PhasePoint p = start;
  if (t == 0.0) return p;
  const int n = std::max(1, static_cast<int>(std::ceil(t / spec.dt_max)));
  const double delta = t / n;
  auto rhs = [&](double s, const PhasePoint& q, Vec3& dx, Vec3& du) {
    dx = Vec3(-q.v(0), 0.0, 0.0);
    const double e1 = fields.E(s, q.x)(0), b1 = fields.B(s, q.x)(0);
    du = -(Vec3(e1, 0.0, 0.0) + q.v.cross(Vec3(b1, 0.0, 0.0)));
  };
  for (int i = 0; i < n; ++i) {
    const double s = t - i * delta;
    Vec3 k1x, k1v, k2x, k2v, k3x, k3v, k4x, k4v;
    rhs(s, p, k1x, k1v);
    rhs(s - delta / 2, {p.x + delta / 2 * k1x, p.v + delta / 2 * k1v}, k2x, k2v);
    rhs(s - delta / 2, {p.x + delta / 2 * k2x, p.v + delta / 2 * k2v}, k3x, k3v);
    rhs(s - delta, {p.x + delta * k3x, p.v + delta * k3v}, k4x, k4v);
    p.x += delta / 6 * (k1x + 2 * k2x + 2 * k3x + k4x);
    p.v += delta / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
    check_finite(p, i);
  }
  return p;
}

}  // namespace detail

// The fast-phase-constant limit profile G(t, x, u): the initial datum carried
// along the backward slow limit flow.
inline double eval_G(double t, const Vec3& x, const Vec3& u, const FieldConfig& fields,
                     const InitialDistribution& f0, const IntegratorSpec& spec) {
  const PhasePoint foot = detail::limit_flow_backward(t, {x, u}, fields, spec);
  return f0.value(foot.x, foot.v);
}

// The coarse solution by phase averaging: limit flow backward, then the
// initial datum averaged over the fast phase at the foot.
inline double eval_f_weak(double t, const Vec3& x, const Vec3& v, const FieldConfig& fields,
                          const InitialDistribution& f0, const IntegratorSpec& spec, int n_tau) {
  if (n_tau < 4) throw std::invalid_argument("eval_f_weak: n_tau must be >= 4");
  const PhasePoint foot = detail::limit_flow_backward(t, {x, v}, fields, spec);
  double acc = 0.0;
  for (int j = 0; j < n_tau; ++j) acc += f0.value(foot.x, ucar(static_cast<double>(j) / n_tau, foot.v));
  return acc / n_tau;
}

// The gyroaveraged parallel model: two-dimensional backward transport in
// (x_par, v_par) with the perpendicular coordinates frozen, closed by the
// gyroaveraged initial datum.
inline double eval_m(double t, const Vec3& x, double v_par, double v_perp,
                     const FieldConfig& fields, const InitialDistribution& f0,
                     const IntegratorSpec& spec, int n_alpha) {
  PhasePoint p{x, Vec3(v_par, 0.0, 0.0)};
  if (t > 0.0) {
    const int n = std::max(1, static_cast<int>(std::ceil(t / spec.dt_max)));
    const double delta = t / n;
    auto rhs = [&](double s, const PhasePoint& q, double& dx1, double& dv1) {
      dx1 = -q.v(0);
      dv1 = -fields.E(s, q.x)(0);
    };
    for (int i = 0; i < n; ++i) {
      const double s = t - i * delta;
      double k1x, k1v, k2x, k2v, k3x, k3v, k4x, k4v;
      rhs(s, p, k1x, k1v);
      rhs(s - delta / 2, {p.x + Vec3(delta / 2 * k1x, 0, 0), Vec3(p.v(0) + delta / 2 * k1v, 0, 0)}, k2x, k2v);
      rhs(s - delta / 2, {p.x + Vec3(delta / 2 * k2x, 0, 0), Vec3(p.v(0) + delta / 2 * k2v, 0, 0)}, k3x, k3v);
      rhs(s - delta, {p.x + Vec3(delta * k3x, 0, 0), Vec3(p.v(0) + delta * k3v, 0, 0)}, k4x, k4v);
      p.x(0) += delta / 6 * (k1x + 2 * k2x + 2 * k3x + k4x);
      p.v(0) += delta / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
      detail::check_finite(p, i);
    }
  }
  return m_initial(f0, p.x, p.v(0), v_perp, n_alpha);
}

}  // namespace gyroscale

#endif  // GYROSCALE_FLOW
