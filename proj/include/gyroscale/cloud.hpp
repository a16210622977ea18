// Deterministic low-discrepancy sample clouds for phase-space quadrature:
// gaussian-weighted and box-uniform cartesian clouds, and a cylindrical cloud
// realizing the gyroaveraged measure. Regeneration from the same spec is
// bit-identical regardless of worker count.

#ifndef GYROSCALE_CLOUD
#define GYROSCALE_CLOUD

#include <gyroscale/geometry.hpp>
#include <gyroscale/parallel.hpp>

#include <vector>

namespace gyroscale {

enum class CloudKind { gauss_weighted, low_discrepancy_box, cylindrical };

struct CloudSpec {
  CloudKind kind = CloudKind::gauss_weighted;
  int size_log2 = 14;
  unsigned seed = 42;
  Vec3 x_center = Vec3::Zero();
  Vec3 x_sigma = Vec3::Ones();  // per-axis gaussian widths, or box half-widths
  Vec3 v_sigma = Vec3::Ones();  // per-axis velocity widths (cylindrical reads v_sigma(0))
  double v_perp_min = 0.3;      // cylindrical radial range
  double v_perp_max = 2.5;
};

// Widths below this pin their coordinate to the center and drop the matching
// factor from the weight: the cloud then samples a lower-dimensional fiber
// with the disintegrated measure.
inline constexpr double cloud_collapse_width = 1e-8;

// Cartesian sample with quadrature weight: integrals of g against the ambient
// measure are approximated by sum of w * g.
struct CloudPoint {
  Vec3 x;
  Vec3 v;
  double w;
};

// Cylindrical sample (x, v_par, v_perp) with weight realizing the measure
// dx dv_par v_perp dv_perp; the gyrophase stays free for profile sampling.
struct CylPoint {
  Vec3 x;
  double v_par;
  double v_perp;
  double w;
};

class SampleCloud {
 public:
  static SampleCloud generate(const CloudSpec& spec);

  const CloudSpec& spec() const { return spec_; }
  int size() const { return static_cast<int>(std::max(points_.size(), cyl_points_.size())); }
  const std::vector<CloudPoint>& points() const { return points_; }
  const std::vector<CylPoint>& cyl_points() const { return cyl_points_; }

 private:
  CloudSpec spec_;
  std::vector<CloudPoint> points_;
  std::vector<CylPoint> cyl_points_;
};

// Halton radical inverse in the given base at the given index.
double halton(unsigned long long index, int base);

// Inverse of the standard normal CDF, accurate to double roundoff: rational
// initial guess polished by one Newton step through the complementary error
// function.
double inverse_normal_cdf(double p);

// Weighted root-mean-square over a cloud: sqrt(sum of w * value^2) with the
// fixed-shape pairwise reduction.
double cloud_norm(const std::vector<double>& weights, const std::vector<double>& values);

}  // namespace gyroscale

#endif  // GYROSCALE_CLOUD
