// Real trigonometric series on uniform periodic grids: analysis of node
// values, evaluation between nodes, and the mean-free antiderivative.
// Backs both periodic projection calculi; sizes stay small, so the direct
// O(N^2) transform is used for determinism and zero dependencies.

#ifndef GYROSCALE_TRIG_SERIES
#define GYROSCALE_TRIG_SERIES

#include <gyroscale/geometry.hpp>

#include <vector>

namespace gyroscale {

class TrigSeries {
 public:
  // Fits the interpolant through n even node values f_j = f(j * period / n).
  // The Nyquist column is kept for evaluation and dropped on antidifferentiation,
  // where it carries no usable information.
  static TrigSeries analyze(const Eigen::VectorXd& values, double period) {
    const int n = static_cast<int>(values.size());
    if (n < 4 || n % 2 != 0)
      throw std::invalid_argument("TrigSeries: node count must be even and >= 4");
    TrigSeries s;
    s.period_ = period;
    const int half = n / 2;
    s.a_.assign(half - 1, 0.0);
    s.b_.assign(half - 1, 0.0);
    std::vector<double> ct(n), st(n);
    for (int k = 0; k < n; ++k) {
      ct[k] = std::cos(two_pi * k / n);
      st[k] = std::sin(two_pi * k / n);
    }
    s.c0_ = values.sum() / n;
    for (int m = 1; m < half; ++m) {
      double am = 0.0, bm = 0.0;
      for (int j = 0; j < n; ++j) {
        const int k = static_cast<int>((static_cast<long>(m) * j) % n);
        am += values(j) * ct[k];
        bm += values(j) * st[k];
      }
      s.a_[m - 1] = 2.0 * am / n;
      s.b_[m - 1] = 2.0 * bm / n;
    }
    double ny = 0.0;
    for (int j = 0; j < n; ++j) ny += values(j) * (j % 2 == 0 ? 1.0 : -1.0);
    s.nyquist_ = ny / n;
    s.n_ = n;
    return s;
  }

  double eval(double t) const {
    const double w = two_pi / period_;
    double acc = c0_;
    for (std::size_t m = 1; m <= a_.size(); ++m)
      acc += a_[m - 1] * std::cos(w * m * t) + b_[m - 1] * std::sin(w * m * t);
    acc += nyquist_ * std::cos(w * (n_ / 2) * t);
    return acc;
  }

  double derivative(double t) const {
    const double w = two_pi / period_;
    double acc = 0.0;
    for (std::size_t m = 1; m <= a_.size(); ++m)
      acc += w * m * (-a_[m - 1] * std::sin(w * m * t) + b_[m - 1] * std::cos(w * m * t));
    return acc;
  }

  // Periodic antiderivative of the fluctuating part, with zero mean. The
  // constant mode is discarded (callers enforce their own mean preconditions).
  TrigSeries antiderivative() const {
    TrigSeries p;
    p.period_ = period_;
    p.n_ = n_;
    p.c0_ = 0.0;
    p.nyquist_ = 0.0;
    const double w = two_pi / period_;
    p.a_.assign(a_.size(), 0.0);
    p.b_.assign(b_.size(), 0.0);
    for (std::size_t m = 1; m <= a_.size(); ++m) {
      p.a_[m - 1] = -b_[m - 1] / (w * m);
      p.b_[m - 1] = a_[m - 1] / (w * m);
    }
    return p;
  }

  double mean() const { return c0_; }
  double period() const { return period_; }

 private:
  double period_ = 1.0, c0_ = 0.0, nyquist_ = 0.0;
  int n_ = 0;
  std::vector<double> a_, b_;
};

}  // namespace gyroscale

#endif  // GYROSCALE_TRIG_SERIES
