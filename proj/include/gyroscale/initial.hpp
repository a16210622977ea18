// Initial phase-space distributions with analytic gradients, and the
// gyroaveraged initial datum for the coarse parallel model.

#ifndef GYROSCALE_INITIAL
#define GYROSCALE_INITIAL

#include <gyroscale/geometry.hpp>

namespace gyroscale {

enum class InitialFamily { isotropic_gaussian, anisotropic_gaussian, gyro_gaussian };

// Smooth rapidly decaying initial data f0(x, v). The gyro-gaussian family
// modulates the isotropic gaussian by 1 + a*cos(k*alpha), |a| < 1, integer
// k >= 1; on the axis v_perp = 0 the phase convention alpha = 0 applies.
struct InitialDistribution {
  InitialFamily family = InitialFamily::isotropic_gaussian;
  Vec3 x0 = Vec3::Zero();
  double sigma_x = 1.0, sigma_v = 1.0;        // isotropic / gyro widths
  Vec3 sig_x = Vec3::Ones(), sig_v = Vec3::Ones();  // anisotropic widths
  double mod_amp = 0.5;                       // gyro modulation amplitude a
  int mod_k = 1;                              // gyro harmonic k

  double value(const Vec3& x, const Vec3& v) const {
    switch (family) {
      case InitialFamily::isotropic_gaussian:
        return iso(x, v);
      case InitialFamily::anisotropic_gaussian: {
        const Vec3 dx = x - x0;
        double q = 0.0;
        for (int i = 0; i < 3; ++i)
          q += dx(i) * dx(i) / (2 * sig_x(i) * sig_x(i)) + v(i) * v(i) / (2 * sig_v(i) * sig_v(i));
        return std::exp(-q);
      }
      case InitialFamily::gyro_gaussian:
        return iso(x, v) * modulation(v);
    }
    return 0.0;
  }

  // Returns (grad_x f0, grad_v f0), both analytic.
  std::pair<Vec3, Vec3> gradient(const Vec3& x, const Vec3& v) const {
    switch (family) {
      case InitialFamily::isotropic_gaussian: {
        const double f = iso(x, v);
        return {-(x - x0) / (sigma_x * sigma_x) * f, -v / (sigma_v * sigma_v) * f};
      }
      case InitialFamily::anisotropic_gaussian: {
        const double f = value(x, v);
        Vec3 gx, gv;
        for (int i = 0; i < 3; ++i) {
          gx(i) = -(x(i) - x0(i)) / (sig_x(i) * sig_x(i)) * f;
          gv(i) = -v(i) / (sig_v(i) * sig_v(i)) * f;
        }
        return {gx, gv};
      }
      case InitialFamily::gyro_gaussian: {
        const double g = iso(x, v), mod = modulation(v);
        Vec3 gx = -(x - x0) / (sigma_x * sigma_x) * (g * mod);
        Vec3 gv = -v / (sigma_v * sigma_v) * (g * mod);
        const double vp2 = v(1) * v(1) + v(2) * v(2);
        if (vp2 > 0.0) {
          const double alpha = std::atan2(v(2), v(1));
          const double dmod = -mod_amp * mod_k * std::sin(mod_k * alpha);
          gv(1) += g * dmod * (-v(2) / vp2);
          gv(2) += g * dmod * (v(1) / vp2);
        }
        return {gx, gv};
      }
    }
    return {Vec3::Zero(), Vec3::Zero()};
  }

 private:
  double iso(const Vec3& x, const Vec3& v) const {
    return std::exp(-(x - x0).squaredNorm() / (2 * sigma_x * sigma_x)
                    - v.squaredNorm() / (2 * sigma_v * sigma_v));
  }
  double modulation(const Vec3& v) const {
    const double vp = std::hypot(v(1), v(2));
    const double alpha = vp > 0.0 ? std::atan2(v(2), v(1)) : 0.0;
    return 1.0 + mod_amp * std::cos(mod_k * alpha);
  }
};

// Gyroaverage of the initial datum at fixed (x, v_par, v_perp): the uniform
// periodic trapezoid over the gyrophase, exact to spectral accuracy.
inline double m_initial(const InitialDistribution& f0, const Vec3& x, double v_par,
                        double v_perp, int n_alpha) {
  if (n_alpha < 4 || n_alpha % 2 != 0)
    throw std::invalid_argument("m_initial: n_alpha must be even and >= 4");
  double acc = 0.0;
  for (int k = 0; k < n_alpha; ++k)
    acc += f0.value(x, cyl_to_cart(v_par, v_perp, two_pi * k / n_alpha));
  return acc / n_alpha;
}

}  // namespace gyroscale

#endif  // GYROSCALE_INITIAL
