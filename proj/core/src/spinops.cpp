#include "lacsim/spinops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace lacsim::spinops {

namespace {

void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) {
    throw InvalidArgument(fmt::format("{} must be finite", name));
  }
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace

SpinSystemSpec SpinSystemSpec::single_spin(double v) {
  return {SystemKind::SingleSpin, v, 0.0, 0.0, 0.0};
}

SpinSystemSpec SpinSystemSpec::isotropic(double a, double v) {
  return {SystemKind::TwoSpinIsotropic, v, a, 0.0, 0.0};
}

SpinSystemSpec SpinSystemSpec::dipolar(double d, double theta, double v) {
  return {SystemKind::TwoSpinDipolar, v, 0.0, d, theta};
}

void SpinSystemSpec::validate() const {
  require_finite(v_perturbation, "v_perturbation");
  require_finite(a_iso, "a_iso");
  require_finite(d_dd, "d_dd");
  require_finite(theta_dd, "theta_dd");
  if (theta_dd < 0.0 || theta_dd > std::numbers::pi) {
    throw InvalidArgument(fmt::format("theta_dd = {} outside [0, pi]", theta_dd));
  }
  switch (kind) {
    case SystemKind::SingleSpin:
      if (a_iso != 0.0 || d_dd != 0.0 || theta_dd != 0.0) {
        throw InvalidArgument("single spin: a_iso, d_dd and theta_dd must be zero");
      }
      break;
    case SystemKind::TwoSpinIsotropic:
      if (d_dd != 0.0 || theta_dd != 0.0) {
        throw InvalidArgument("isotropic coupling: d_dd and theta_dd must be zero");
      }
      break;
    case SystemKind::TwoSpinDipolar:
      if (a_iso != 0.0) {
        throw InvalidArgument("dipolar coupling: a_iso must be zero");
      }
      break;
  }
}

const char* to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::SingleSpin:
      return "single_spin";
    case SystemKind::TwoSpinIsotropic:
      return "two_spin_isotropic";
    case SystemKind::TwoSpinDipolar:
      return "two_spin_dipolar";
  }
  return "unknown";
}

SpinHalfOperators spin_half_operators() {
  using namespace std::complex_literals;
  SpinHalfOperators ops{CMatrix(2, 2), CMatrix(2, 2), CMatrix(2, 2)};
  ops.x << 0.0, 0.5, 0.5, 0.0;
  ops.y << 0.0, -0.5i, 0.5i, 0.0;
  ops.z << 0.5, 0.0, 0.0, -0.5;
  return ops;
}

EmbeddedOperators embedded_operators(const SpinSystemSpec& system) {
  const SpinHalfOperators s = spin_half_operators();
  if (system.dim() == 2) return {s, {}};
  const CMatrix id = CMatrix::Identity(2, 2);
  return {{kron(s.x, id), kron(s.y, id), kron(s.z, id)},
          {kron(id, s.x), kron(id, s.y), kron(id, s.z)}};
}

CMatrix zeeman_operator(const SpinSystemSpec& system) {
  return embedded_operators(system).s.z;
}

CMatrix perturbation_term(const SpinSystemSpec& system) {
  return system.v_perturbation * embedded_operators(system).s.x;
}

CMatrix coupling_term(const SpinSystemSpec& system) {
  const int dim = system.dim();
  if (system.kind == SystemKind::SingleSpin) return CMatrix::Zero(dim, dim);

  const auto [s, i] = embedded_operators(system);
  const CMatrix s_dot_i = s.x * i.x + s.y * i.y + s.z * i.z;
  if (system.kind == SystemKind::TwoSpinIsotropic) return system.a_iso * s_dot_i;

  // n = (sin theta, 0, cos theta)
  const double nx = std::sin(system.theta_dd);
  const double nz = std::cos(system.theta_dd);
  const CMatrix s_n = nx * s.x + nz * s.z;
  const CMatrix i_n = nx * i.x + nz * i.z;
  return system.d_dd * (3.0 * s_n * i_n - s_dot_i);
}

CMatrix static_part(const SpinSystemSpec& system) {
  return perturbation_term(system) + coupling_term(system);
}

HermitianMatrix hamiltonian_at(const SpinSystemSpec& system, double omega_inst) {
  system.validate();
  require_finite(omega_inst, "omega_inst");
  CMatrix h = omega_inst * zeeman_operator(system) + static_part(system);
  // Products of Hermitian operators carry rounding-level anti-Hermitian parts.
  h = 0.5 * (h + h.adjoint()).eval();
  return HermitianMatrix(std::move(h));
}

std::vector<double> sorted_eigenvalues(const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h.matrix(), Eigen::EigenvaluesOnly);
  std::vector<double> values(es.eigenvalues().data(),
                             es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(values.begin(), values.end());
  return values;
}

std::vector<std::vector<double>> energy_levels(const SpinSystemSpec& system,
                                               std::span<const double> omega0_grid) {
  if (omega0_grid.empty()) throw InvalidArgument("energy_levels: empty grid");
  if (!std::is_sorted(omega0_grid.begin(), omega0_grid.end())) {
    throw InvalidArgument("energy_levels: grid must be sorted");
  }
  std::vector<std::vector<double>> table;
  table.reserve(omega0_grid.size());
  for (double omega0 : omega0_grid) {
    table.push_back(sorted_eigenvalues(hamiltonian_at(system, omega0)));
  }
  return table;
}

}  // namespace lacsim::spinops
