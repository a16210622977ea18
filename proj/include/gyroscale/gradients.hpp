// Perpendicular phase-space gradients of the limit profile G. For constant
// parallel fields the backward limit flow has a closed form, so the gradient
// is exact; otherwise central differences around eval_G are used.

#ifndef GYROSCALE_GRADIENTS
#define GYROSCALE_GRADIENTS

#include <gyroscale/flow.hpp>

#include <cmath>

namespace gyroscale {

enum class GradientMethod {
  analytic_when_available,  // closed form for zero / parallel-uniform fields, FD otherwise
  central_fd,               // always central differences
};

struct GradientSpec {
  GradientMethod method = GradientMethod::analytic_when_available;
  double fd_step = 1e-4;
};

// Gradients of G(t, x, u) in the perpendicular coordinates only; the parallel
// components are kept at zero so the vectors can be dotted directly against
// full 3-vectors.
struct PerpGradient {
  Vec3 grad_x = Vec3::Zero();
  Vec3 grad_u = Vec3::Zero();
};

namespace detail {

// Backward foot of the limit flow for constant parallel fields: the
// perpendicular position is frozen, the parallel pair is free fall, and the
// perpendicular velocity rotates with angle b1 * t.
inline PerpGradient grad_g_perp_parallel(double t, const Vec3& x, const Vec3& u,
                                         const FieldConfig& fields,
                                         const InitialDistribution& f0) {
  const double e1 = fields.E(0.0, x)(0);
  const double b1 = fields.B(0.0, x)(0);
  Vec3 foot_x(x(0) - u(0) * t + 0.5 * e1 * t * t, x(1), x(2));
  const double c = std::cos(b1 * t);
  const double s = std::sin(b1 * t);
  Vec3 foot_u(u(0) - e1 * t, c * u(1) - s * u(2), s * u(1) + c * u(2));
  const auto [gx, gv] = f0.gradient(foot_x, foot_u);
  PerpGradient g;
  g.grad_x(1) = gx(1);
  g.grad_x(2) = gx(2);
  // chain rule through the rotation of the perpendicular foot velocity
  g.grad_u(1) = c * gv(1) + s * gv(2);
  g.grad_u(2) = -s * gv(1) + c * gv(2);
  return g;
}

inline PerpGradient grad_g_perp_fd(double t, const Vec3& x, const Vec3& u,
                                   const FieldConfig& fields,
                                   const InitialDistribution& f0,
                                   const IntegratorSpec& ispec, double h) {
  auto g_at = [&](const Vec3& xx, const Vec3& uu) {
    return eval_G(t, xx, uu, fields, f0, ispec);
  };
  PerpGradient g;
  for (int c = 1; c < 3; ++c) {
    Vec3 xp = x, xm = x;
    xp(c) += h;
    xm(c) -= h;
    g.grad_x(c) = (g_at(xp, u) - g_at(xm, u)) / (2.0 * h);
    Vec3 up = u, um = u;
    up(c) += h;
    um(c) -= h;
    g.grad_u(c) = (g_at(x, up) - g_at(x, um)) / (2.0 * h);
  }
  return g;
}

}  // namespace detail

inline PerpGradient grad_G_perp(double t, const Vec3& x, const Vec3& u,
                                const FieldConfig& fields, const InitialDistribution& f0,
                                const IntegratorSpec& ispec = {},
                                const GradientSpec& gspec = {}) {
  if (gspec.method == GradientMethod::analytic_when_available && fields.parallel_constant())
    return detail::grad_g_perp_parallel(t, x, u, fields, f0);
  return detail::grad_g_perp_fd(t, x, u, fields, f0, ispec, gspec.fd_step);
}

}  // namespace gyroscale

#endif  // GYROSCALE_GRADIENTS
