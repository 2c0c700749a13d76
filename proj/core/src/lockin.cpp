#include "lacsim/lockin.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "lacsim/types.hpp"

namespace lacsim::lockin {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kCoarsePhases = 360;
constexpr double kPhaseTolerance = 1e-6;
constexpr double kFlatThreshold = 1e-14;

}  // namespace

double LockinPoint::magnitude() const { return std::hypot(x, y); }

LockinPoint demodulate(std::span<const double> population_waveform, double f_mod) {
  const std::size_t n = population_waveform.size();
  if (n < 4) throw InvalidArgument(fmt::format("demodulate: need at least 4 samples, got {}", n));
  double x = 0.0;
  double y = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    const double angle = 2.0 * kPi * (static_cast<double>(m) / static_cast<double>(n));
    x += population_waveform[m] * std::cos(angle);
    y += population_waveform[m] * std::sin(angle);
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  return {x * inv_n, y * inv_n, 0.0, f_mod};
}

double rotate_phase(const LockinPoint& p, double phi) {
  return p.x * std::cos(phi) + p.y * std::sin(phi);
}

double peak_to_peak(std::span<const LockinPoint> spectrum, double phi) {
  if (spectrum.empty()) return 0.0;
  double lo = rotate_phase(spectrum.front(), phi);
  double hi = lo;
  for (const LockinPoint& p : spectrum) {
    const double v = rotate_phase(p, phi);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo;
}

PhaseAmplitude optimal_phase_amplitude(std::span<const LockinPoint> spectrum) {
  const double step = kPi / kCoarsePhases;
  int best = 0;
  double best_value = -1.0;
  for (int k = 0; k < kCoarsePhases; ++k) {
    const double value = peak_to_peak(spectrum, k * step);
    if (value > best_value) {
      best_value = value;
      best = k;
    }
  }
  if (best_value < kFlatThreshold) {
    throw FlatSpectrum("optimal_phase_amplitude: spectrum is flat at every phase");
  }

  // Golden-section search for the maximum on the bracket around the best grid
  // phase. The objective is pi-periodic, so the bracket may straddle 0.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = (best - 1) * step;
  double b = (best + 1) * step;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = peak_to_peak(spectrum, c);
  double fd = peak_to_peak(spectrum, d);
  while (b - a > kPhaseTolerance) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = peak_to_peak(spectrum, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = peak_to_peak(spectrum, d);
    }
  }
  double phi = 0.5 * (a + b);
  double value = peak_to_peak(spectrum, phi);
  // Never report worse than the grid optimum (the objective is only piecewise smooth).
  if (value < best_value) {
    phi = best * step;
    value = best_value;
  }
  phi = std::fmod(phi, kPi);
  if (phi < 0.0) phi += kPi;
  return {phi, value};
}

}  // namespace lacsim::lockin
