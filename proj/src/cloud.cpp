#include <gyroscale/cloud.hpp>

#include <cmath>
#include <stdexcept>

namespace gyroscale {

double halton(unsigned long long index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("inverse_normal_cdf: p must be in (0,1)");
  // rational approximation (relative error ~1e-9), then one Newton polish
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425, p_high = 1.0 - p_low;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= p_high) {
    const double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Newton step on Phi(x) - p with Phi through erfc for full-range accuracy
  static const double inv_sqrt2 = 0.7071067811865475244;
  static const double inv_sqrt2pi = 0.3989422804014326779;
  const double err = 0.5 * std::erfc(-x * inv_sqrt2) - p;
  x -= err / (inv_sqrt2pi * std::exp(-0.5 * x * x));
  return x;
}

SampleCloud SampleCloud::generate(const CloudSpec& spec) {
  if (spec.size_log2 < 0 || spec.size_log2 > 24)
    throw std::invalid_argument("SampleCloud: size_log2 out of range [0, 24]");
  const int n = 1 << spec.size_log2;
  static const int bases[6] = {2, 3, 5, 7, 11, 13};
  const unsigned long long start = 1 + static_cast<unsigned long long>(spec.seed) * 7919ull;

  SampleCloud cloud;
  cloud.spec_ = spec;
  // per-dimension widths in the flat (x, v) order, with collapsed dimensions
  // pinned to their centers and skipped in the weights
  double width[6], center[6];
  for (int c = 0; c < 3; ++c) {
    width[c] = spec.x_sigma(c);
    center[c] = spec.x_center(c);
    width[3 + c] = spec.v_sigma(c);
    center[3 + c] = 0.0;
  }
  switch (spec.kind) {
    case CloudKind::gauss_weighted: {
      cloud.points_.resize(n);
      for (int i = 0; i < n; ++i) {
        const unsigned long long idx = start + i;
        CloudPoint& p = cloud.points_[i];
        double coords[6], density = 1.0;
        for (int dg = 0; dg < 6; ++dg) {
          if (width[dg] < cloud_collapse_width) {
            coords[dg] = center[dg];
          } else {
            const double q = inverse_normal_cdf(halton(idx, bases[dg]));
            coords[dg] = center[dg] + width[dg] * q;
            density *= std::exp(-0.5 * q * q) / (std::sqrt(2.0 * EIGEN_PI) * width[dg]);
          }
        }
        p.x = Vec3(coords[0], coords[1], coords[2]);
        p.v = Vec3(coords[3], coords[4], coords[5]);
        p.w = 1.0 / (static_cast<double>(n) * density);
      }
      break;
    }
    case CloudKind::low_discrepancy_box: {
      cloud.points_.resize(n);
      double vol = 1.0;
      for (int dg = 0; dg < 6; ++dg)
        if (width[dg] >= cloud_collapse_width) vol *= 2.0 * width[dg];
      for (int i = 0; i < n; ++i) {
        const unsigned long long idx = start + i;
        CloudPoint& p = cloud.points_[i];
        double coords[6];
        for (int dg = 0; dg < 6; ++dg)
          coords[dg] = width[dg] < cloud_collapse_width
                           ? center[dg]
                           : center[dg] + width[dg] * (2.0 * halton(idx, bases[dg]) - 1.0);
        p.x = Vec3(coords[0], coords[1], coords[2]);
        p.v = Vec3(coords[3], coords[4], coords[5]);
        p.w = vol / n;
      }
      break;
    }
    case CloudKind::cylindrical: {
      cloud.cyl_points_.resize(n);
      const double r_lo2 = spec.v_perp_min * spec.v_perp_min;
      const double r_hi2 = spec.v_perp_max * spec.v_perp_max;
      for (int i = 0; i < n; ++i) {
        const unsigned long long idx = start + i;
        CylPoint& p = cloud.cyl_points_[i];
        double density = 1.0;
        for (int c = 0; c < 3; ++c) {
          if (width[c] < cloud_collapse_width) {
            p.x(c) = center[c];
          } else {
            const double q = inverse_normal_cdf(halton(idx, bases[c]));
            p.x(c) = center[c] + width[c] * q;
            density *= std::exp(-0.5 * q * q) / (std::sqrt(2.0 * EIGEN_PI) * width[c]);
          }
        }
        if (width[3] < cloud_collapse_width) {
          p.v_par = 0.0;
        } else {
          const double qv = inverse_normal_cdf(halton(idx, bases[3]));
          p.v_par = width[3] * qv;
          density *= std::exp(-0.5 * qv * qv) / (std::sqrt(2.0 * EIGEN_PI) * width[3]);
        }
        // radial map xi -> sqrt realizes the v_perp dv_perp measure with a
        // constant weight factor over [v_perp_min, v_perp_max]
        const double xi = halton(idx, bases[4]);
        p.v_perp = std::sqrt(r_lo2 + (r_hi2 - r_lo2) * xi);
        p.w = (r_hi2 - r_lo2) / 2.0 / (static_cast<double>(n) * density);
      }
      break;
    }
  }
  return cloud;
}

double cloud_norm(const std::vector<double>& weights, const std::vector<double>& values) {
  if (weights.size() != values.size())
    throw std::invalid_argument("cloud_norm: weight/value size mismatch");
  std::vector<double> sq(values.size());
  for (size_t i = 0; i < values.size(); ++i) sq[i] = weights[i] * values[i] * values[i];
  return std::sqrt(pairwise_sum(sq));
}

}  // namespace gyroscale
