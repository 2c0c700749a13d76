#pragma once

#include <vector>

#include "lacsim/spinops.hpp"
#include "lacsim/types.hpp"

namespace lacsim::liouville {

// Phenomenological electron relaxation and optical pumping. Nuclear
// relaxation is not modelled.
struct RelaxationSpec {
  double r1 = 0.0;      // longitudinal, drives populations toward equality
  double r2 = 0.0;      // transverse, damps electron coherences
  double pump_j = 0.0;  // beta -> alpha pumping
  bool pump_damps_coherence = true;

  void validate() const;
};

// Linear map on density matrices, stored as a dense dim_h^2 x dim_h^2 matrix
// acting on the row-major vectorization: rho(i, j) -> index i * dim_h + j.
class Superoperator {
 public:
  Superoperator(int dim_h, CMatrix m);

  static Superoperator zero(int dim_h);
  static Superoperator identity(int dim_h);

  int dim_h() const noexcept { return dim_h_; }
  const CMatrix& matrix() const noexcept { return m_; }

  CMatrix apply(const CMatrix& rho) const;

  friend Superoperator operator+(const Superoperator& a, const Superoperator& b);
  friend Superoperator operator*(const Superoperator& a, const Superoperator& b);

 private:
  int dim_h_;
  CMatrix m_;
};

CVector vectorize(const CMatrix& rho);
CMatrix unvectorize(const CVector& v, int dim_h);

// L such that L vec(rho) = vec(-i [H, rho]).
Superoperator coherent_liouvillian(const HermitianMatrix& h);

// Relaxation acts on the electron and is the identity on the nucleus:
// electron-diagonal blocks exchange at R1/2 each way plus J from beta to
// alpha; electron coherences decay at R2 (+ J/2 if pump_damps_coherence).
Superoperator relaxation_superoperator(const RelaxationSpec& relax,
                                       const spinops::SpinSystemSpec& system);

// exp(L dt). Throws InvalidArgument for a bad dt and PropagatorFailure if the
// result is not finite.
Superoperator propagator(const Superoperator& l_total, double dt);

// Orthonormal basis of Hermitian operators in which every Hermiticity
// preserving superoperator is a real matrix. Basis element k = i * dim_h + j
// is |i><i| for i == j, (|i><j| + |j><i|)/sqrt2 for i < j and
// (-i|j><i| + i|i><j|)/sqrt2 for i > j, so population indices coincide with
// the vectorization indices.
class HermitianBasis {
 public:
  explicit HermitianBasis(int dim_h);

  int dim_h() const noexcept { return dim_h_; }
  int size() const noexcept { return dim_h_ * dim_h_; }

  // Columns are vec(B_k); unitary.
  const CMatrix& transform() const noexcept { return w_; }

  // Throws InvalidArgument if the superoperator does not preserve Hermiticity.
  RMatrix to_real(const Superoperator& l) const;
  Superoperator to_complex(const RMatrix& l) const;

  RVector coefficients(const CMatrix& rho) const;
  CMatrix operator_from(const RVector& r) const;

  // Tr(rho) = trace_row . r and bright population = bright_row . r.
  const RVector& trace_row() const noexcept { return trace_row_; }
  const RVector& bright_row() const noexcept { return bright_row_; }
  int population_index(int state) const noexcept { return state * dim_h_ + state; }

 private:
  int dim_h_;
  CMatrix w_;
  RVector trace_row_;
  RVector bright_row_;
};

// L(omega) = base + omega * zeeman in the real Hermitian basis.
struct GeneratorPencil {
  int dim_h = 0;
  RMatrix base;
  RMatrix zeeman;

  RMatrix at(double omega) const { return base + omega * zeeman; }
};

GeneratorPencil make_generator_pencil(const spinops::SpinSystemSpec& system,
                                      const RelaxationSpec& relax);

RMatrix real_propagator(const RMatrix& l, double dt);

}  // namespace lacsim::liouville
