#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "lacsim/lockin.hpp"
#include "lacsim/types.hpp"

using namespace lacsim;
using lockin::LockinPoint;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> sampled(int n, const auto& f) {
  std::vector<double> w(n);
  for (int m = 0; m < n; ++m) w[m] = f(2 * kPi * m / n);
  return w;
}

// Dispersive line whose two quadratures are rotated by phi0.
std::vector<LockinPoint> rotated_line(double phi0, int n = 81) {
  std::vector<LockinPoint> out;
  for (int i = 0; i < n; ++i) {
    const double w = -2.0 + 4.0 * i / (n - 1);
    const double s = -2 * w / std::pow(1 + w * w, 2);
    out.push_back({s * std::cos(phi0), s * std::sin(phi0), w, 0.1});
  }
  return out;
}

}  // namespace

TEST(Demodulate, Normalization) {
  for (int n : {4, 16, 1000}) {
    auto c = lockin::demodulate(sampled(n, [](double) { return 0.7; }), 1.0);
    EXPECT_NEAR(c.x, 0.0, 1e-15);
    EXPECT_NEAR(c.y, 0.0, 1e-15);
    auto x = lockin::demodulate(sampled(n, [](double a) { return 0.3 * std::cos(a); }), 1.0);
    EXPECT_NEAR(x.x, 0.15, 1e-15);
    EXPECT_NEAR(x.y, 0.0, 1e-15);
    auto y = lockin::demodulate(sampled(n, [](double a) { return 0.3 * std::sin(a); }), 1.0);
    EXPECT_NEAR(y.x, 0.0, 1e-15);
    EXPECT_NEAR(y.y, 0.15, 1e-15);
  }
  EXPECT_THROW(lockin::demodulate(std::vector<double>{1, 2, 3}, 1.0), InvalidArgument);
  EXPECT_EQ(lockin::demodulate(sampled(8, [](double) { return 0.0; }), 0.25).f_mod, 0.25);
}

TEST(Demodulate, LinearityAndBound) {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(64), b(64), sum(64);
    for (int m = 0; m < 64; ++m) {
      a[m] = u(rng);
      b[m] = u(rng);
      sum[m] = a[m] + b[m];
    }
    const auto pa = lockin::demodulate(a, 1), pb = lockin::demodulate(b, 1),
               ps = lockin::demodulate(sum, 1);
    EXPECT_NEAR(ps.x, pa.x + pb.x, 1e-15);
    EXPECT_NEAR(ps.y, pa.y + pb.y, 1e-15);
    EXPECT_LE(pa.magnitude(), *std::max_element(a.begin(), a.end()));
  }
}

TEST(RotatePhase, Values) {
  const LockinPoint p{0.4, -0.3};
  EXPECT_DOUBLE_EQ(lockin::rotate_phase(p, 0.0), 0.4);
  EXPECT_NEAR(lockin::rotate_phase(p, kPi / 2), -0.3, 1e-16);
  EXPECT_NEAR(lockin::rotate_phase({1, 1}, kPi / 4), std::sqrt(2.0), 1e-15);
  for (double phi : {0.1, 1.0, 2.5}) {
    EXPECT_NEAR(lockin::rotate_phase(p, phi + kPi), -lockin::rotate_phase(p, phi), 1e-15);
  }
}

TEST(OptimalPhase, SingleQuadrature) {
  const auto line = rotated_line(0.0);
  const auto best = lockin::optimal_phase_amplitude(line);
  EXPECT_LT(std::min(best.phi_star, kPi - best.phi_star), 1e-6);
  EXPECT_NEAR(best.peak_to_peak, lockin::peak_to_peak(line, 0.0), 1e-12);
}

TEST(OptimalPhase, EquivariantUnderGlobalRotation) {
  const auto reference = lockin::optimal_phase_amplitude(rotated_line(0.0));
  for (double phi0 : {0.3, 1.2, 2.9}) {
    const auto best = lockin::optimal_phase_amplitude(rotated_line(phi0));
    const double diff = std::remainder(best.phi_star - phi0, kPi);
    EXPECT_LT(std::abs(diff), 1e-5) << phi0;
    EXPECT_NEAR(best.peak_to_peak, reference.peak_to_peak, 1e-9);
    EXPECT_GE(best.phi_star, 0.0);
    EXPECT_LT(best.phi_star, kPi);
  }
}

TEST(OptimalPhase, PeakToPeakIsPiPeriodic) {
  const auto line = rotated_line(0.8);
  for (double phi : {0.0, 0.4, 2.0}) {
    EXPECT_NEAR(lockin::peak_to_peak(line, phi), lockin::peak_to_peak(line, phi + kPi), 1e-14);
  }
}

TEST(OptimalPhase, NeverWorseThanGrid) {
  std::mt19937 rng(37);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<LockinPoint> pts(7);
    for (auto& p : pts) p = {n(rng), n(rng)};
    const auto best = lockin::optimal_phase_amplitude(pts);
    for (int k = 0; k < 360; ++k) {
      EXPECT_GE(best.peak_to_peak, lockin::peak_to_peak(pts, k * kPi / 360) - 1e-15);
    }
  }
}

TEST(OptimalPhase, FlatSpectrum) {
  std::vector<LockinPoint> flat(10, LockinPoint{1e-3, -2e-3});
  EXPECT_THROW(lockin::optimal_phase_amplitude(flat), FlatSpectrum);
  EXPECT_THROW(lockin::optimal_phase_amplitude(std::vector<LockinPoint>{}), FlatSpectrum);
}
