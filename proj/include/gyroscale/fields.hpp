// External electromagnetic fields: closed-form families, all bounded with
// bounded first derivatives, plus the fixed fast-rotation axis M.

#ifndef GYROSCALE_FIELDS
#define GYROSCALE_FIELDS

#include <gyroscale/geometry.hpp>

namespace gyroscale {

enum class FieldFamily { zero, uniform, parallel_uniform, smooth_bounded };

// Closed-form E(t, x), B(t, x). The smooth-bounded family is a componentwise
// product of sinusoids with a polynomial-decay envelope 1 / (1 + |x|^2 / R^2);
// the other families are spatially constant.
struct FieldConfig {
  FieldFamily family = FieldFamily::zero;

  // uniform and parallel-uniform amplitudes (parallel-uniform keeps component 1 only)
  Vec3 e0 = Vec3::Zero();
  Vec3 b0 = Vec3::Zero();

  // smooth-bounded parameters: per-component amplitude, wavevector row, phase
  Vec3 amp_e = Vec3::Zero();
  Vec3 amp_b = Vec3::Zero();
  Mat3 k_e = Mat3::Zero();
  Mat3 k_b = Mat3::Zero();
  Vec3 phase_e = Vec3::Zero();
  Vec3 phase_b = Vec3::Zero();
  double env_radius = 4.0;

  // Fast-rotation vector; the axis and the 2*pi scale are fixed by the model.
  static Vec3 M() { return Vec3(two_pi, 0.0, 0.0); }

  double envelope(const Vec3& x) const { return 1.0 / (1.0 + x.squaredNorm() / (env_radius * env_radius)); }

  Vec3 E(double, const Vec3& x) const {
    switch (family) {
      case FieldFamily::zero: return Vec3::Zero();
      case FieldFamily::uniform: return e0;
      case FieldFamily::parallel_uniform: return Vec3(e0(0), 0.0, 0.0);
      case FieldFamily::smooth_bounded: {
        const double env = envelope(x);
        return Vec3(amp_e(0) * std::sin(k_e.row(0).dot(x) + phase_e(0)) * env,
                    amp_e(1) * std::sin(k_e.row(1).dot(x) + phase_e(1)) * env,
                    amp_e(2) * std::sin(k_e.row(2).dot(x) + phase_e(2)) * env);
      }
    }
    return Vec3::Zero();
  }

  Vec3 B(double, const Vec3& x) const {
    switch (family) {
      case FieldFamily::zero: return Vec3::Zero();
      case FieldFamily::uniform: return b0;
      case FieldFamily::parallel_uniform: return Vec3(b0(0), 0.0, 0.0);
      case FieldFamily::smooth_bounded: {
        const double env = envelope(x);
        return Vec3(amp_b(0) * std::sin(k_b.row(0).dot(x) + phase_b(0)) * env,
                    amp_b(1) * std::sin(k_b.row(1).dot(x) + phase_b(1)) * env,
                    amp_b(2) * std::sin(k_b.row(2).dot(x) + phase_b(2)) * env);
      }
    }
    return Vec3::Zero();
  }

  bool is_zero() const { return family == FieldFamily::zero; }

  // True when the slow limit flow has a closed-form backward map (constant
  // parallel fields), enabling analytic limit-model gradients.
  bool parallel_constant() const {
    return family == FieldFamily::zero || family == FieldFamily::parallel_uniform;
  }
};

}  // namespace gyroscale

#endif  // GYROSCALE_FIELDS
