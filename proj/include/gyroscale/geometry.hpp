// Fast-rotation geometry: the gyrophase group r(tau), cartesian/cylindrical
// velocity charts, and the co-rotating change of variables.

#ifndef GYROSCALE_GEOMETRY
#define GYROSCALE_GEOMETRY

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gyroscale {

template <typename Scalar> using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar> using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
using Vec3 = Vector3<double>;
using Mat3 = Matrix3<double>;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Fast phase, kept as its canonical representative in [0, 1).
struct TauPhase {
  double value;
  TauPhase(double t = 0.0) : value(t - std::floor(t)) {
    if (!(value < 1.0)) value = 0.0;  // guards the rounding edge t - floor(t) == 1
  }
  operator double() const { return value; }
};

// Rotation by angle 2*pi*tau about the magnetic axis e1.
template <typename Scalar>
Matrix3<Scalar> rotation(Scalar tau) {
  const Scalar c = std::cos(Scalar(two_pi) * tau), s = std::sin(Scalar(two_pi) * tau);
  Matrix3<Scalar> r;
  r << Scalar(1), Scalar(0), Scalar(0),
       Scalar(0), c, -s,
       Scalar(0), s, c;
  return r;
}
inline Mat3 rotation(TauPhase tau) { return rotation<double>(tau.value); }

// Co-rotating velocity u = r(tau) v, applied without forming the matrix.
template <typename Derived>
Vector3<typename Derived::Scalar> ucar(double tau, const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  const Scalar c = std::cos(Scalar(two_pi * tau)), s = std::sin(Scalar(two_pi * tau));
  return Vector3<Scalar>(v(0), c * v(1) - s * v(2), s * v(1) + c * v(2));
}

// Inverse chart v = r(-tau) u.
template <typename Derived>
Vector3<typename Derived::Scalar> ucar_inv(double tau, const Eigen::MatrixBase<Derived>& u) {
  return ucar(-tau, u);
}

// Cylindrical velocity coordinates about e1; alpha is the gyrophase in [0, 2*pi),
// with the convention alpha = 0 on the axis v_perp = 0.
struct CylVelocity {
  double v_par, v_perp, alpha;
};

inline CylVelocity cart_to_cyl(const Vec3& v) {
  CylVelocity c;
  c.v_par = v(0);
  c.v_perp = std::hypot(v(1), v(2));
  c.alpha = c.v_perp > 0.0 ? std::atan2(v(2), v(1)) : 0.0;
  if (c.alpha < 0.0) c.alpha += two_pi;
  return c;
}

inline Vec3 cyl_to_cart(double v_par, double v_perp, double alpha) {
  return Vec3(v_par, v_perp * std::cos(alpha), v_perp * std::sin(alpha));
}
inline Vec3 cyl_to_cart(const CylVelocity& c) { return cyl_to_cart(c.v_par, c.v_perp, c.alpha); }

}  // namespace gyroscale

#endif  // GYROSCALE_GEOMETRY
