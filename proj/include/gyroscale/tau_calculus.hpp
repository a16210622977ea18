// Projection calculus for the fast phase: the filter onto functions constant
// along gyration characteristics, its complement, and the mean-free
// antiderivative that inverts the fast operator on the complement.

#ifndef GYROSCALE_TAU_CALCULUS
#define GYROSCALE_TAU_CALCULUS

#include <gyroscale/profile.hpp>

#include <functional>

namespace gyroscale {

// A function of the fast phase and velocity, 1-periodic in the phase.
using TauField = std::function<double(double tau, const Vec3& v)>;

// Raised when an operand required to have zero characteristic mean does not;
// carries the measured mean so callers can report it.
class KerNormError : public std::domain_error {
 public:
  KerNormError(double measured, double tol)
      : std::domain_error("characteristic mean " + std::to_string(measured) +
                          " exceeds the zero-mean precondition " + std::to_string(tol)),
        measured_(measured) {}
  double measured() const { return measured_; }

 private:
  double measured_;
};

// Filter onto the kernel of the fast operator: the average of g along the
// gyration characteristic through (tau, v), so the result depends on (tau, v)
// only through u = ucar(tau, v).
inline double tau_ker_project(const TauField& g, double tau, const Vec3& v, int n_tau) {
  if (n_tau < 4) throw std::invalid_argument("tau_ker_project: n_tau must be >= 4");
  double acc = 0.0;
  for (int j = 0; j < n_tau; ++j) {
    const double sigma = static_cast<double>(j) / n_tau;
    acc += g(sigma, ucar(tau - sigma, v));
  }
  return acc / n_tau;
}

// Independent realization of the same filter: resample g in the co-rotating
// velocity and average over the shifted midpoint phase grid. Agreement with
// tau_ker_project is a diagonalization check, not a shared code path.
inline double tau_ker_project_corotating(const TauField& g, double tau, const Vec3& v, int n_tau) {
  if (n_tau < 4) throw std::invalid_argument("tau_ker_project_corotating: n_tau must be >= 4");
  const Vec3 u = ucar(tau, v);
  double acc = 0.0;
  for (int j = 0; j < n_tau; ++j) {
    const double sigma = (j + 0.5) / n_tau;
    acc += g(sigma, ucar_inv(sigma, u));
  }
  return acc / n_tau;
}

// Complement of the filter: g minus its characteristic average.
inline double tau_im_part(const TauField& g, double tau, const Vec3& v, int n_tau) {
  return g(tau, v) - tau_ker_project(g, tau, v, n_tau);
}

// The antiderivative of a zero-mean field along one gyration characteristic.
// On the characteristic u = ucar(tau, v) the fast operator reduces to d/dtau
// of the pullback psi(s) = h(s, ucar_inv(s, u)), which is 1-periodic; the
// antiderivative is its mean-free periodic primitive, held as a trig series.
class CharacteristicAntiderivative {
 public:
  CharacteristicAntiderivative(const TauField& h, double tau, const Vec3& v, int n_tau,
                               double ker_tol = 1e-8)
      : u_(ucar(tau, v)) {
    Eigen::VectorXd psi(n_tau);
    for (int j = 0; j < n_tau; ++j) {
      const double s = static_cast<double>(j) / n_tau;
      psi(j) = h(s, ucar_inv(s, u_));
    }
    const TrigSeries series = TrigSeries::analyze(psi, 1.0);
    measured_mean_ = series.mean();
    if (std::abs(measured_mean_) > ker_tol) throw KerNormError(measured_mean_, ker_tol);
    phi_ = series.antiderivative();
  }

  // k(tau', ucar_inv(tau', u)) for any phase on this characteristic.
  double k(double tau) const { return phi_.eval(tau); }

  // The fast operator applied to k, by central differences along the
  // characteristic: d/ds k(tau + s, r(-s) v) at s = 0.
  double fast_operator(double tau, double fd_step) const {
    return (phi_.eval(tau + fd_step) - phi_.eval(tau - fd_step)) / (2.0 * fd_step);
  }

  double measured_mean() const { return measured_mean_; }
  const Vec3& u() const { return u_; }

 private:
  Vec3 u_;
  TrigSeries phi_;
  double measured_mean_ = 0.0;
};

// k(tau, v) with zero characteristic mean, solving the fast operator equation
// op(k) = h. Precondition: h has zero characteristic mean (tolerance 1e-8);
// violations raise KerNormError carrying the measured mean.
inline double tau_antiderivative(const TauField& h, double tau, const Vec3& v, int n_tau) {
  return CharacteristicAntiderivative(h, tau, v, n_tau).k(tau);
}

// Pushes a Ker-profile and an Im-profile through the fast-phase integral at
// fixed (x, v_par, v_perp) and measures how cleanly the gyrophase calculus
// separates them afterwards: returns (sup-norm of the gyrophase fluctuation
// of the integrated Ker part, absolute gyrophase mean of the integrated Im
// part). Both vanish in exact arithmetic.
using TauXVField = std::function<double(double tau, const Vec3& x, const Vec3& v)>;

inline std::pair<double, double> tau_integrate_respects_split(
    const TauXVField& f_ker, const TauXVField& h_im, const Vec3& x, double v_par,
    double v_perp, int n_tau, int n_alpha) {
  auto integrate = [&](const TauXVField& f, double alpha) {
    const Vec3 v = cyl_to_cart(v_par, v_perp, alpha);
    double acc = 0.0;
    for (int j = 0; j < n_tau; ++j) acc += f(static_cast<double>(j) / n_tau, x, v);
    return acc / n_tau;
  };
  const PeriodicProfile ker_profile =
      PeriodicProfile::sample(Period::alpha, n_alpha, [&](double a) { return integrate(f_ker, a); });
  const PeriodicProfile im_profile =
      PeriodicProfile::sample(Period::alpha, n_alpha, [&](double a) { return integrate(h_im, a); });
  const double ker_fluct = alpha_fluct(ker_profile).values().cwiseAbs().maxCoeff();
  const double im_mean = std::abs(alpha_project(im_profile));
  return {ker_fluct, im_mean};
}

}  // namespace gyroscale

#endif  // GYROSCALE_TAU_CALCULUS
