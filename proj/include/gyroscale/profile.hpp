// Periodic node profiles and the gyrophase projection calculus: mean,
// fluctuation, and the mean-free periodic antiderivative.

#ifndef GYROSCALE_PROFILE
#define GYROSCALE_PROFILE

#include <gyroscale/trig_series.hpp>

namespace gyroscale {

enum class Period { alpha, tau };  // period 2*pi, period 1

// Uniform periodic samples q(t_k), t_k = k * period / n, n even >= 4.
class PeriodicProfile {
 public:
  PeriodicProfile(Period tag, Eigen::VectorXd values) : tag_(tag), values_(std::move(values)) {
    if (values_.size() < 4 || values_.size() % 2 != 0)
      throw std::invalid_argument("PeriodicProfile: node count must be even and >= 4");
  }

  // Builds the profile by sampling a callable at the nodes.
  template <typename F>
  static PeriodicProfile sample(Period tag, int n, F&& f) {
    Eigen::VectorXd vals(n);
    const double p = tag == Period::alpha ? two_pi : 1.0;
    for (int k = 0; k < n; ++k) vals(k) = f(p * k / n);
    return PeriodicProfile(tag, std::move(vals));
  }

  Period tag() const { return tag_; }
  double period() const { return tag_ == Period::alpha ? two_pi : 1.0; }
  int size() const { return static_cast<int>(values_.size()); }
  double node(int k) const { return period() * k / size(); }
  const Eigen::VectorXd& values() const { return values_; }
  double operator()(int k) const { return values_(k); }

 private:
  Period tag_;
  Eigen::VectorXd values_;
};

// Node average: the uniform periodic trapezoid of the profile.
inline double alpha_project(const PeriodicProfile& q) { return q.values().mean(); }

// Profile minus its node average.
inline PeriodicProfile alpha_fluct(const PeriodicProfile& q) {
  return PeriodicProfile(q.tag(), q.values().array() - q.values().mean());
}

// Periodic antiderivative of the fluctuating part, re-centered to node-average
// zero. Computed through the trigonometric interpolant, so it is exact for
// band-limited profiles. Precondition: the input is mean-free to 1e-10.
inline PeriodicProfile alpha_antiderivative(const PeriodicProfile& q) {
  const double mean = q.values().mean();
  if (std::abs(mean) > 1e-10)
    throw std::invalid_argument("alpha_antiderivative: node average " + std::to_string(mean) +
                                " exceeds the mean-free precondition 1e-10");
  const TrigSeries p = TrigSeries::analyze(q.values(), q.period()).antiderivative();
  Eigen::VectorXd out(q.size());
  for (int k = 0; k < q.size(); ++k) out(k) = p.eval(q.node(k));
  out.array() -= out.mean();
  return PeriodicProfile(q.tag(), std::move(out));
}

}  // namespace gyroscale

#endif  // GYROSCALE_PROFILE
