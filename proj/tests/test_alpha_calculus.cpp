// Gyrophase-average calculus on periodic profiles: projection, fluctuation,
// complementarity, and the spectral antiderivative.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <gyroscale/profile.hpp>
#include <gyroscale/trig_series.hpp>

#include <cmath>

using namespace gyroscale;

namespace {

PeriodicProfile alpha_sample(int n, double (*f)(double)) {
  return PeriodicProfile::sample(Period::alpha, n, f);
}

}  // namespace

TEST_CASE("profile constructor enforces even node counts") {
  CHECK_THROWS_AS(PeriodicProfile(Period::alpha, Eigen::VectorXd::Zero(3)), std::invalid_argument);
  CHECK_THROWS_AS(PeriodicProfile(Period::alpha, Eigen::VectorXd::Zero(5)), std::invalid_argument);
  CHECK_NOTHROW(PeriodicProfile(Period::alpha, Eigen::VectorXd::Zero(4)));
}

TEST_CASE("projection of basic profiles") {
  const PeriodicProfile c = alpha_sample(32, +[](double) { return 2.5; });
  CHECK(alpha_project(c) == doctest::Approx(2.5).epsilon(1e-15));

  const PeriodicProfile cosp = alpha_sample(32, +[](double a) { return std::cos(a); });
  CHECK(std::abs(alpha_project(cosp)) <= 1e-14);

  const PeriodicProfile cos2 = alpha_sample(32, +[](double a) { return std::cos(a) * std::cos(a); });
  CHECK(alpha_project(cos2) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("fluctuation of basic profiles") {
  const PeriodicProfile c = alpha_sample(16, +[](double) { return 3.0; });
  CHECK(alpha_fluct(c).values().cwiseAbs().maxCoeff() <= 1e-15);

  const PeriodicProfile cosp = alpha_sample(16, +[](double a) { return std::cos(a); });
  CHECK((alpha_fluct(cosp).values() - cosp.values()).cwiseAbs().maxCoeff() <= 1e-15);

  const PeriodicProfile mix = alpha_sample(64, +[](double a) { return 2.0 + std::sin(3 * a); });
  const PeriodicProfile s3 = alpha_sample(64, +[](double a) { return std::sin(3 * a); });
  CHECK((alpha_fluct(mix).values() - s3.values()).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("projector idempotence and exact complementarity") {
  const PeriodicProfile q =
      alpha_sample(64, +[](double a) { return 3.0 + std::cos(a) + std::sin(5 * a); });
  const double mean = alpha_project(q);
  const PeriodicProfile fluct = alpha_fluct(q);

  // re-projecting the fluctuation annihilates it
  CHECK(std::abs(alpha_project(fluct)) <= 1e-14);
  // the fluctuation is a fixed point of the fluctuation map
  CHECK((alpha_fluct(fluct).values() - fluct.values()).cwiseAbs().maxCoeff() <= 1e-15);
  // mean + fluctuation reassembles the profile exactly, nodewise
  for (int k = 0; k < q.size(); ++k)
    CHECK(std::abs(mean + fluct(k) - q(k)) <= 1e-14);
}

TEST_CASE("antiderivative of pure harmonics") {
  const PeriodicProfile cosp = alpha_sample(64, +[](double a) { return std::cos(a); });
  const PeriodicProfile sin_ref = alpha_sample(64, +[](double a) { return std::sin(a); });
  CHECK((alpha_antiderivative(cosp).values() - sin_ref.values()).cwiseAbs().maxCoeff() <= 1e-12);

  // the raw antiderivative of sin is 1 - cos; the mean-free convention
  // re-centers it to -cos
  const PeriodicProfile sinp = alpha_sample(64, +[](double a) { return std::sin(a); });
  const PeriodicProfile mcos_ref = alpha_sample(64, +[](double a) { return -std::cos(a); });
  CHECK((alpha_antiderivative(sinp).values() - mcos_ref.values()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("antiderivative reconstructs a smooth fluctuation spectrally") {
  // band-limited smooth profile, mean removed
  const PeriodicProfile q = alpha_sample(
      64, +[](double a) { return std::cos(a) + 0.4 * std::sin(2 * a) - 0.2 * std::cos(5 * a); });
  const PeriodicProfile fluct = alpha_fluct(q);
  const PeriodicProfile anti = alpha_antiderivative(fluct);

  // analytic antiderivative, re-centered (its mean is zero already)
  const PeriodicProfile ref = alpha_sample(64, +[](double a) {
    return std::sin(a) - 0.2 * std::cos(2 * a) - 0.04 * std::sin(5 * a);
  });
  CHECK((anti.values() - ref.values()).cwiseAbs().maxCoeff() <= 1e-10);

  // the antiderivative is mean-free by gauge
  CHECK(std::abs(alpha_project(anti)) <= 1e-12);

  // spectral derivative of the output reproduces the input
  const TrigSeries series = TrigSeries::analyze(anti.values(), two_pi);
  for (int k = 0; k < anti.size(); ++k)
    CHECK(std::abs(series.derivative(anti.node(k)) - fluct(k)) <= 1e-10);
}

TEST_CASE("finite-difference derivative of the antiderivative converges at second order") {
  auto fd_error = [](int n) {
    const PeriodicProfile s2 =
        PeriodicProfile::sample(Period::alpha, n, [](double a) { return std::sin(2 * a); });
    const PeriodicProfile anti = alpha_antiderivative(s2);
    const double h = two_pi / n;
    double worst = 0.0;
    for (int k = 0; k < n; ++k) {
      const double fd = (anti((k + 1) % n) - anti((k + n - 1) % n)) / (2.0 * h);
      worst = std::max(worst, std::abs(fd - s2(k)));
    }
    return worst;
  };
  const double e64 = fd_error(64), e128 = fd_error(128);
  CHECK(e64 <= 1e-2);
  CHECK(e64 / e128 >= 3.5);
}
