#pragma once

#include <span>

namespace lacsim::lockin {

struct LockinPoint {
  double x = 0.0;  // cosine quadrature
  double y = 0.0;  // sine quadrature
  double omega0 = 0.0;
  double f_mod = 0.0;

  double magnitude() const;
};

// X = (1/N) sum_m w_m cos(2 pi m / N), Y likewise with sin, for a waveform
// sampled at t_m = m T / N over exactly one period. Requires N >= 4.
LockinPoint demodulate(std::span<const double> population_waveform, double f_mod);

// X' = X cos(phi) + Y sin(phi)
double rotate_phase(const LockinPoint& p, double phi);

struct PhaseAmplitude {
  double phi_star;      // in [0, pi)
  double peak_to_peak;  // max X' - min X' at phi_star
};

double peak_to_peak(std::span<const LockinPoint> spectrum, double phi);

// Phase maximizing the peak-to-peak of X' over the spectrum: 360-point grid on
// [0, pi) followed by golden-section refinement to 1e-6 rad. Throws
// FlatSpectrum if the peak-to-peak stays below 1e-14 at every grid phase.
PhaseAmplitude optimal_phase_amplitude(std::span<const LockinPoint> spectrum);

}  // namespace lacsim::lockin
