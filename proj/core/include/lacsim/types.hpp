#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace lacsim {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad parameters, non-finite inputs, dimension mismatches.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class PropagatorFailure : public Error {
 public:
  using Error::Error;
};

class NoUniqueSteadyState : public Error {
 public:
  NoUniqueSteadyState(const std::string& what, int null_dim)
      : Error(what), null_dim_(null_dim) {}
  int null_dim() const noexcept { return null_dim_; }

 private:
  int null_dim_;
};

class FlatSpectrum : public Error {
 public:
  using Error::Error;
};

// Dense Hermitian operator on the spin Hilbert space (dimension 2 or 4).
class HermitianMatrix {
 public:
  static constexpr double kTolerance = 1e-12;

  // Throws InvalidArgument if `m` is not square or not Hermitian to kTolerance.
  explicit HermitianMatrix(CMatrix m);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const noexcept { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

 private:
  CMatrix m_;
};

// Hermitian, unit-trace density matrix.
class DensityMatrix {
 public:
  static constexpr double kTolerance = 1e-10;

  explicit DensityMatrix(CMatrix m);

  // |k><k| in the computational basis.
  static DensityMatrix pure_basis_state(int dim, int k);
  static DensityMatrix maximally_mixed(int dim);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const noexcept { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

  // Sum of populations whose electron index is alpha (spin up).
  double bright_population() const;
  double min_eigenvalue() const;

 private:
  CMatrix m_;
};

// Index of the electron spin projection for basis state k of a dim-dimensional
// space. Basis states are |m_S> (dim 2) or |m_S m_I> with the electron index
// major (dim 4). 0 = alpha, 1 = beta.
inline int electron_index(int dim, int k) { return dim == 2 ? k : k / 2; }
inline int nuclear_index(int dim, int k) { return dim == 2 ? 0 : k % 2; }

}  // namespace lacsim
