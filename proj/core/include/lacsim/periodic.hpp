#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "lacsim/liouville.hpp"
#include "lacsim/spinops.hpp"
#include "lacsim/types.hpp"

namespace lacsim::periodic {

enum class Sampling { Midpoint, LeftEndpoint };

const char* to_string(Sampling sampling);

// omega(t) = omega0 + omega1 * cos(2 pi f_mod t), one period split into
// n_steps equal intervals. Within interval k the generator is evaluated at
// t = (k + 1/2) dt (Midpoint) or t = k dt (LeftEndpoint).
struct DriveSpec {
  double omega0 = 0.0;
  double omega1 = 0.0;
  double f_mod = 1.0;
  long n_steps = 64;
  Sampling sampling = Sampling::Midpoint;

  double period() const { return 1.0 / f_mod; }
  double dt() const { return period() / static_cast<double>(n_steps); }
  double omega_at(double t) const;
  // Zeeman frequency used for interval k.
  double step_omega(long k) const;

  void validate() const;
};

struct PeriodOptions {
  // Keep all N step propagators (memory grows as N * dim_h^4).
  bool retain_steps = false;
  // Exploit omega_k == omega_{N-1-k} for Midpoint sampling with even N so that
  // only N/2 exponentials are formed. Ignored when retain_steps is set.
  bool use_symmetry = true;
};

// One modulation period of a fixed operating point. Everything is stored in
// the real Hermitian basis of liouville::HermitianBasis. The cosine and sine
// functionals give the lock-in quadratures of the bright population sampled
// at t_m = m dt, m = 0..N-1, for any initial state:
//   X = cos_functional . r0,  Y = sin_functional . r0.
class PeriodCache {
 public:
  PeriodCache(DriveSpec drive, int dim_h, RMatrix monodromy, RVector cos_functional,
              RVector sin_functional, std::vector<RMatrix> steps);

  const DriveSpec& drive() const noexcept { return drive_; }
  int dim_h() const noexcept { return dim_h_; }
  const liouville::HermitianBasis& basis() const noexcept { return basis_; }

  const RMatrix& monodromy_real() const noexcept { return monodromy_; }
  liouville::Superoperator monodromy() const;

  bool has_steps() const noexcept { return !steps_.empty(); }
  const std::vector<RMatrix>& step_propagators_real() const noexcept { return steps_; }
  std::vector<liouville::Superoperator> step_propagators() const;

  const RVector& cos_functional() const noexcept { return cos_functional_; }
  const RVector& sin_functional() const noexcept { return sin_functional_; }

  // Lock-in quadratures (X, Y) of the waveform that starts at rho0.
  std::pair<double, double> quadratures(const DensityMatrix& rho0) const;

 private:
  DriveSpec drive_;
  int dim_h_;
  liouville::HermitianBasis basis_;
  RMatrix monodromy_;
  RVector cos_functional_;
  RVector sin_functional_;
  std::vector<RMatrix> steps_;
};

PeriodCache build_period(const spinops::SpinSystemSpec& system,
                         const liouville::RelaxationSpec& relax, const DriveSpec& drive,
                         const PeriodOptions& options = {});

struct SteadyStateOptions {
  // Row of (U - 1) replaced by the trace constraint; -1 selects the last
  // population row. Must be a population row.
  int replaced_row = -1;
  double residual_tolerance = 1e-8;
  double null_space_tolerance = 1e-8;
};

struct SteadyState {
  DensityMatrix rho;
  double residual;  // max |(U - 1) vec(rho)|
  bool used_fallback;
};

// rho(0) with U rho(0) = rho(0) and unit trace. Throws NoUniqueSteadyState
// when (U - 1) has more than one singular value below the null-space tolerance.
SteadyState solve_steady_state(const PeriodCache& cache, const SteadyStateOptions& options = {});
DensityMatrix periodic_steady_state(const PeriodCache& cache,
                                    const SteadyStateOptions& options = {});

// Applies the monodromy n_periods times.
DensityMatrix apply_periods(const PeriodCache& cache, const DensityMatrix& rho0, long n_periods);

// Bright population at t_m = m dt for m = 0..N-1, starting from rho0.
std::vector<double> period_waveform(const spinops::SpinSystemSpec& system,
                                    const liouville::RelaxationSpec& relax,
                                    const DriveSpec& drive, const DensityMatrix& rho0);

struct TracePoint {
  double t;
  double omega;
  double population;
};

// Propagates rho0 over n_periods * N steps. Emits the initial point and one
// point after every step.
std::vector<TracePoint> time_trace(const spinops::SpinSystemSpec& system,
                                   const liouville::RelaxationSpec& relax,
                                   const DriveSpec& drive, const DensityMatrix& rho0,
                                   long n_periods);

// Propagation under an arbitrary field schedule omega(t) on [t_start, t_end]
// with n_steps piecewise-constant intervals. `observer`, if set, is called
// with (t, omega, rho) at t_start and after every step.
using Observer = std::function<void(double, double, const DensityMatrix&)>;
DensityMatrix propagate_schedule(const spinops::SpinSystemSpec& system,
                                 const liouville::RelaxationSpec& relax,
                                 const std::function<double(double)>& omega_of_t, double t_start,
                                 double t_end, long n_steps, const DensityMatrix& rho0,
                                 Sampling sampling = Sampling::Midpoint,
                                 const Observer& observer = {});

}  // namespace lacsim::periodic
