#include "lacsim/liouville.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>
#include <unsupported/Eigen/MatrixFunctions>

namespace lacsim::liouville {

void RelaxationSpec::validate() const {
  const auto check = [](double value, const char* name) {
    if (!std::isfinite(value) || value < 0.0) {
      throw InvalidArgument(fmt::format("{} = {} must be finite and non-negative", name, value));
    }
  };
  check(r1, "r1");
  check(r2, "r2");
  check(pump_j, "pump_j");
}

Superoperator::Superoperator(int dim_h, CMatrix m) : dim_h_(dim_h), m_(std::move(m)) {
  const Eigen::Index n = static_cast<Eigen::Index>(dim_h) * dim_h;
  if (dim_h <= 0 || m_.rows() != n || m_.cols() != n) {
    throw InvalidArgument(fmt::format("Superoperator: expected {}x{} matrix, got {}x{}", n, n,
                                      m_.rows(), m_.cols()));
  }
}

Superoperator Superoperator::zero(int dim_h) {
  return {dim_h, CMatrix::Zero(dim_h * dim_h, dim_h * dim_h)};
}

Superoperator Superoperator::identity(int dim_h) {
  return {dim_h, CMatrix::Identity(dim_h * dim_h, dim_h * dim_h)};
}

CMatrix Superoperator::apply(const CMatrix& rho) const {
  if (rho.rows() != dim_h_ || rho.cols() != dim_h_) {
    throw InvalidArgument("Superoperator::apply: dimension mismatch");
  }
  return unvectorize(m_ * vectorize(rho), dim_h_);
}

Superoperator operator+(const Superoperator& a, const Superoperator& b) {
  if (a.dim_h_ != b.dim_h_) throw InvalidArgument("Superoperator sum: dimension mismatch");
  return {a.dim_h_, a.m_ + b.m_};
}

Superoperator operator*(const Superoperator& a, const Superoperator& b) {
  if (a.dim_h_ != b.dim_h_) throw InvalidArgument("Superoperator product: dimension mismatch");
  return {a.dim_h_, a.m_ * b.m_};
}

CVector vectorize(const CMatrix& rho) {
  const Eigen::Index d = rho.rows();
  CVector v(d * rho.cols());
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < rho.cols(); ++j) v(i * rho.cols() + j) = rho(i, j);
  }
  return v;
}

CMatrix unvectorize(const CVector& v, int dim_h) {
  if (v.size() != static_cast<Eigen::Index>(dim_h) * dim_h) {
    throw InvalidArgument("unvectorize: length mismatch");
  }
  CMatrix rho(dim_h, dim_h);
  for (int i = 0; i < dim_h; ++i) {
    for (int j = 0; j < dim_h; ++j) rho(i, j) = v(i * dim_h + j);
  }
  return rho;
}

Superoperator coherent_liouvillian(const HermitianMatrix& h) {
  const int d = h.dim();
  const Complex minus_i(0.0, -1.0);
  CMatrix l = CMatrix::Zero(d * d, d * d);
  // d rho_ij / dt = -i sum_k (H_ik rho_kj - rho_ik H_kj)
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const int row = i * d + j;
      for (int k = 0; k < d; ++k) {
        l(row, k * d + j) += minus_i * h(i, k);
        l(row, i * d + k) -= minus_i * h(k, j);
      }
    }
  }
  return {d, std::move(l)};
}

Superoperator relaxation_superoperator(const RelaxationSpec& relax,
                                       const spinops::SpinSystemSpec& system) {
  relax.validate();
  system.validate();
  const int d = system.dim();
  const int nuclear_dim = d / 2;
  const auto state = [nuclear_dim](int e, int n) { return e * nuclear_dim + n; };
  const auto idx = [d](int a, int b) { return a * d + b; };

  CMatrix r = CMatrix::Zero(d * d, d * d);
  const double half_r1 = 0.5 * relax.r1;
  const double j = relax.pump_j;
  for (int n = 0; n < nuclear_dim; ++n) {
    for (int m = 0; m < nuclear_dim; ++m) {
      const int alpha = idx(state(0, n), state(0, m));
      const int beta = idx(state(1, n), state(1, m));
      r(alpha, alpha) -= half_r1;
      r(alpha, beta) += half_r1 + j;
      r(beta, alpha) += half_r1;
      r(beta, beta) -= half_r1 + j;
    }
  }

  const double coherence_rate = relax.r2 + (relax.pump_damps_coherence ? 0.5 * j : 0.0);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      if (electron_index(d, a) != electron_index(d, b)) r(idx(a, b), idx(a, b)) -= coherence_rate;
    }
  }
  return {d, std::move(r)};
}

Superoperator propagator(const Superoperator& l_total, double dt) {
  if (!std::isfinite(dt) || dt <= 0.0) {
    throw InvalidArgument(fmt::format("propagator: dt = {} must be finite and positive", dt));
  }
  if (!l_total.matrix().allFinite()) throw PropagatorFailure("propagator: non-finite generator");
  CMatrix u = (l_total.matrix() * dt).exp();
  if (!u.allFinite()) throw PropagatorFailure("propagator: matrix exponential overflowed");
  return {l_total.dim_h(), std::move(u)};
}

HermitianBasis::HermitianBasis(int dim_h) : dim_h_(dim_h) {
  if (dim_h <= 0) throw InvalidArgument("HermitianBasis: dimension must be positive");
  const int n = size();
  const double s = 1.0 / std::numbers::sqrt2;
  w_ = CMatrix::Zero(n, n);
  for (int i = 0; i < dim_h; ++i) {
    for (int j = 0; j < dim_h; ++j) {
      const int k = i * dim_h + j;
      if (i == j) {
        w_(i * dim_h + i, k) = 1.0;
      } else if (i < j) {
        w_(i * dim_h + j, k) = s;
        w_(j * dim_h + i, k) = s;
      } else {
        // B = (-i|j><i| + i|i><j|) / sqrt2 with j < i
        w_(j * dim_h + i, k) = Complex(0.0, -s);
        w_(i * dim_h + j, k) = Complex(0.0, s);
      }
    }
  }
  trace_row_ = RVector::Zero(n);
  bright_row_ = RVector::Zero(n);
  for (int i = 0; i < dim_h; ++i) {
    trace_row_(population_index(i)) = 1.0;
    if (electron_index(dim_h, i) == 0) bright_row_(population_index(i)) = 1.0;
  }
}

RMatrix HermitianBasis::to_real(const Superoperator& l) const {
  if (l.dim_h() != dim_h_) throw InvalidArgument("HermitianBasis::to_real: dimension mismatch");
  const CMatrix m = w_.adjoint() * l.matrix() * w_;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (m.imag().cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InvalidArgument("HermitianBasis::to_real: superoperator does not preserve Hermiticity");
  }
  return m.real();
}

Superoperator HermitianBasis::to_complex(const RMatrix& l) const {
  return {dim_h_, w_ * l.cast<Complex>() * w_.adjoint()};
}

RVector HermitianBasis::coefficients(const CMatrix& rho) const {
  return (w_.adjoint() * vectorize(rho)).real();
}

CMatrix HermitianBasis::operator_from(const RVector& r) const {
  return unvectorize(w_ * r.cast<Complex>(), dim_h_);
}

GeneratorPencil make_generator_pencil(const spinops::SpinSystemSpec& system,
                                      const RelaxationSpec& relax) {
  const HermitianBasis basis(system.dim());
  const Superoperator l_static =
      coherent_liouvillian(HermitianMatrix(spinops::static_part(system))) +
      relaxation_superoperator(relax, system);
  const Superoperator l_zeeman =
      coherent_liouvillian(HermitianMatrix(spinops::zeeman_operator(system)));
  return {system.dim(), basis.to_real(l_static), basis.to_real(l_zeeman)};
}

RMatrix real_propagator(const RMatrix& l, double dt) {
  if (!std::isfinite(dt) || dt <= 0.0) {
    throw InvalidArgument(fmt::format("real_propagator: dt = {} must be finite and positive", dt));
  }
  RMatrix u = (l * dt).exp();
  if (!u.allFinite()) throw PropagatorFailure("real_propagator: matrix exponential overflowed");
  return u;
}

}  // namespace lacsim::liouville
