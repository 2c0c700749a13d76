#include "lacsim/types.hpp"

#include <cmath>

#include <fmt/format.h>

namespace lacsim {

namespace {

double hermiticity_defect(const CMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace

HermitianMatrix::HermitianMatrix(CMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) {
    throw InvalidArgument("HermitianMatrix: matrix must be square and non-empty");
  }
  if (!m_.allFinite()) {
    throw InvalidArgument("HermitianMatrix: non-finite entries");
  }
  const double defect = hermiticity_defect(m_);
  if (defect > kTolerance) {
    throw InvalidArgument(fmt::format("HermitianMatrix: not Hermitian (defect {:.3g})", defect));
  }
}

DensityMatrix::DensityMatrix(CMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || (m_.rows() != 2 && m_.rows() != 4)) {
    throw InvalidArgument("DensityMatrix: dimension must be 2 or 4");
  }
  if (!m_.allFinite()) {
    throw InvalidArgument("DensityMatrix: non-finite entries");
  }
  const double defect = hermiticity_defect(m_);
  if (defect > kTolerance) {
    throw InvalidArgument(fmt::format("DensityMatrix: not Hermitian (defect {:.3g})", defect));
  }
  const Complex tr = m_.trace();
  if (std::abs(tr - 1.0) > kTolerance) {
    throw InvalidArgument(
        fmt::format("DensityMatrix: trace {:.17g}{:+.3g}i is not 1", tr.real(), tr.imag()));
  }
}

DensityMatrix DensityMatrix::pure_basis_state(int dim, int k) {
  if (k < 0 || k >= dim) throw InvalidArgument("pure_basis_state: index out of range");
  CMatrix m = CMatrix::Zero(dim, dim);
  m(k, k) = 1.0;
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return DensityMatrix(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

double DensityMatrix::bright_population() const {
  double p = 0.0;
  for (int k = 0; k < dim(); ++k) {
    if (electron_index(dim(), k) == 0) p += m_(k, k).real();
  }
  return p;
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace lacsim
