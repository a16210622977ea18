// First-order corrector of the two-scale expansion. The raw corrector has a
// nonzero component in the kernel of the fast rotation operator; both that
// component and the centered (kernel-free) variant have closed forms because
// the fast-phase dependence is a pure first harmonic, so the period filter is
// evaluated exactly instead of by quadrature.

#ifndef GYROSCALE_CORRECTOR
#define GYROSCALE_CORRECTOR

#include <gyroscale/geometry.hpp>
#include <gyroscale/gradients.hpp>

namespace gyroscale {

// Everything the corrector needs at one slow-time point on one fast
// characteristic: the invariant velocity u, the fields at (t, x), and the
// perpendicular gradients of G at (t, x, u). All fast-phase evaluations along
// the same characteristic can share one context.
struct CorrectorContext {
  Vec3 u = Vec3::Zero();
  Vec3 e = Vec3::Zero();
  Vec3 b = Vec3::Zero();
  PerpGradient grad;
};

inline CorrectorContext make_corrector_context(double t, const Vec3& x, const Vec3& u,
                                               const FieldConfig& fields,
                                               const InitialDistribution& f0,
                                               const IntegratorSpec& ispec = {},
                                               const GradientSpec& gspec = {}) {
  CorrectorContext ctx;
  ctx.u = u;
  ctx.e = fields.E(t, x);
  ctx.b = fields.B(t, x);
  ctx.grad = grad_G_perp(t, x, u, fields, f0, ispec, gspec);
  return ctx;
}

// Raw corrector: the rotation difference r(tau + 1/4) - r(1/4) applied to the
// velocity and to the fields, paired against the perpendicular gradients of G.
// Vanishes at tau = 0 by construction.
inline double corrector_l(double tau, const Vec3& v, const CorrectorContext& ctx) {
  const Mat3 delta = rotation(tau + 0.25) - rotation(0.25);
  const Vec3 xdot = delta * v;
  const Vec3 udot = delta * ctx.e + ctx.u.cross(Vec3(delta * ctx.b));
  return xdot.dot(ctx.grad.grad_x) + udot.dot(ctx.grad.grad_u);
}

// Fast-period filter of the raw corrector. On the characteristic through u the
// filtered velocity vector is r(1/4) u - u1 e1 and the field matrix collapses
// to Q = diag(1,0,0) - r(1/4); the result depends on (tau, v) through u only.
inline double corrector_l_ker(const CorrectorContext& ctx) {
  const Mat3 quarter = rotation(0.25);
  Vec3 xdot = quarter * ctx.u;
  xdot(0) = 0.0;  // u1 e1 subtraction; the parallel slot is dead anyway
  Mat3 q = -quarter;
  q(0, 0) += 1.0;
  const Vec3 udot = q * ctx.e + ctx.u.cross(Vec3(q * ctx.b));
  return xdot.dot(ctx.grad.grad_x) + udot.dot(ctx.grad.grad_u);
}

// Centered corrector: raw minus its fast-period filter, entirely inside the
// image of the fast operator. Closed form by the same first-harmonic algebra.
inline double corrector_l_centered(double tau, const Vec3& v, const CorrectorContext& ctx) {
  Vec3 xdot = ctx.u(0) * Vec3::UnitX() - rotation(0.25) * v;
  xdot(0) = 0.0;
  Mat3 dc = rotation(tau + 0.25);
  dc(0, 0) -= 1.0;  // subtract the parallel projector
  const Vec3 udot = dc * ctx.e + ctx.u.cross(Vec3(dc * ctx.b));
  return xdot.dot(ctx.grad.grad_x) + udot.dot(ctx.grad.grad_u);
}

// Convenience forms building the context on the fly from (t, tau, x, v).
inline double corrector_l(double t, double tau, const Vec3& x, const Vec3& v,
                          const FieldConfig& fields, const InitialDistribution& f0,
                          const IntegratorSpec& ispec = {}, const GradientSpec& gspec = {}) {
  const Vec3 u = ucar(tau, v);
  return corrector_l(tau, v, make_corrector_context(t, x, u, fields, f0, ispec, gspec));
}

inline double corrector_l_ker(double t, double tau, const Vec3& x, const Vec3& v,
                              const FieldConfig& fields, const InitialDistribution& f0,
                              const IntegratorSpec& ispec = {}, const GradientSpec& gspec = {}) {
  const Vec3 u = ucar(tau, v);
  return corrector_l_ker(make_corrector_context(t, x, u, fields, f0, ispec, gspec));
}

inline double corrector_l_centered(double t, double tau, const Vec3& x, const Vec3& v,
                                   const FieldConfig& fields, const InitialDistribution& f0,
                                   const IntegratorSpec& ispec = {}, const GradientSpec& gspec = {}) {
  const Vec3 u = ucar(tau, v);
  return corrector_l_centered(tau, v, make_corrector_context(t, x, u, fields, f0, ispec, gspec));
}

}  // namespace gyroscale

#endif  // GYROSCALE_CORRECTOR
