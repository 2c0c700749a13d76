#pragma once

#include <span>
#include <vector>

#include "lacsim/types.hpp"

namespace lacsim::spinops {

enum class SystemKind { SingleSpin, TwoSpinIsotropic, TwoSpinDipolar };

// Spin system and its couplings. All parameters are angular frequencies in
// the dimensionless units used throughout the library.
struct SpinSystemSpec {
  SystemKind kind = SystemKind::SingleSpin;
  double v_perturbation = 0.0;  // V * Sx
  double a_iso = 0.0;           // A (S.I), isotropic model only
  double d_dd = 0.0;            // dipolar strength, dipolar model only
  double theta_dd = 0.0;        // polar angle of the inter-spin vector, radians

  static SpinSystemSpec single_spin(double v);
  static SpinSystemSpec isotropic(double a, double v);
  static SpinSystemSpec dipolar(double d, double theta, double v = 0.0);

  int dim() const noexcept { return kind == SystemKind::SingleSpin ? 2 : 4; }

  // Throws InvalidArgument on non-finite values, theta outside [0, pi], or
  // parameters that do not belong to `kind`.
  void validate() const;
};

const char* to_string(SystemKind kind);

struct SpinHalfOperators {
  CMatrix x;
  CMatrix y;
  CMatrix z;
};

SpinHalfOperators spin_half_operators();

// Electron and nuclear operators embedded in the system's Hilbert space.
struct EmbeddedOperators {
  SpinHalfOperators s;
  SpinHalfOperators i;  // zero-sized for a single spin
};

EmbeddedOperators embedded_operators(const SpinSystemSpec& system);

// The Hamiltonian splits as H(omega) = static_part + omega * zeeman_operator.
CMatrix zeeman_operator(const SpinSystemSpec& system);
CMatrix perturbation_term(const SpinSystemSpec& system);
CMatrix coupling_term(const SpinSystemSpec& system);
CMatrix static_part(const SpinSystemSpec& system);

// Full Hamiltonian at instantaneous Zeeman frequency omega_inst.
HermitianMatrix hamiltonian_at(const SpinSystemSpec& system, double omega_inst);

// Sorted eigenvalues at every grid value. The grid must be non-empty and sorted.
std::vector<std::vector<double>> energy_levels(const SpinSystemSpec& system,
                                               std::span<const double> omega0_grid);

std::vector<double> sorted_eigenvalues(const HermitianMatrix& h);

}  // namespace lacsim::spinops
