#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lacsim/liouville.hpp"
#include "lacsim/lockin.hpp"
#include "lacsim/periodic.hpp"
#include "lacsim/spinops.hpp"

namespace lacsim::sweep {

struct OperatingPoint {
  spinops::SpinSystemSpec system;
  liouville::RelaxationSpec relax;
  periodic::DriveSpec drive;  // n_steps is chosen by the convergence controller
};

// Doubling refinement of N until the relative change of (X, Y) drops below
// target_rel_change.
struct ConvergenceSpec {
  double target_rel_change = 0.01;
  long n_start = 64;
  long n_max = 4'194'304;

  void validate() const;
};

struct PointResult {
  lockin::LockinPoint point;
  long n_used = 0;
  bool converged = false;
  double residual = 0.0;  // fixed-point residual of the accepted steady state
};

// Lock-in quadratures of the periodic steady state at a fixed N.
PointResult evaluate_point(const OperatingPoint& op, long n_steps);

// Evaluates at N = n_start, 2 n_start, ... and stops at the first N whose
// result changes by less than the target when N is doubled; that N and its
// result are returned. If n_max is reached first the result at n_max is
// returned with converged = false.
PointResult converge_n(const OperatingPoint& op, const ConvergenceSpec& convergence);

enum class SweepAxis { Omega0, FMod };

struct SweepPlan {
  SweepAxis axis = SweepAxis::Omega0;
  std::vector<double> grid;
  OperatingPoint base;
  ConvergenceSpec convergence;
  // omega0 grid used for every f_mod of an FMod sweep; empty selects
  // default_inner_grid(base.system).
  std::vector<double> inner_grid;

  void validate() const;
};

// 101 points spanning +-10 max(|V|, |A|, |D_dd|) around zero field.
std::vector<double> default_inner_grid(const spinops::SpinSystemSpec& system);

struct SpectrumRow {
  double axis_value = 0.0;
  double x = 0.0;
  double y = 0.0;
  double x_opt = 0.0;
  long n_used = 0;
  double residual = 0.0;
  bool ok = false;
  bool converged = false;
  std::string error;
};

struct Spectrum {
  std::vector<SpectrumRow> rows;
  double phi_star = 0.0;
  double peak_to_peak = 0.0;
  bool flat = false;  // no phase gives a peak-to-peak above 1e-14
  int failures = 0;
  int not_converged = 0;

  std::vector<lockin::LockinPoint> points() const;  // rows that succeeded
};

struct AmplitudeRow {
  double f_mod = 0.0;
  double peak_to_peak = 0.0;
  double phi_star = 0.0;
  long n_used_max = 0;
  int failures = 0;
  int not_converged = 0;
};

// Called as (completed, total) after each point; may be invoked from worker
// threads but never concurrently.
using ProgressFn = std::function<void(std::size_t, std::size_t)>;

struct SweepOptions {
  int threads = 1;  // 0 selects the hardware concurrency
  ProgressFn progress;
};

Spectrum field_sweep(const SweepPlan& plan, const SweepOptions& options = {});
std::vector<AmplitudeRow> fm_sweep(const SweepPlan& plan, const SweepOptions& options = {});

// Fills phi_star, peak_to_peak and x_opt from the successful rows.
void finalize_spectrum(Spectrum& spectrum);

// Runs body(i) for i in [0, count) on a static interleaved partition.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

int resolve_threads(int requested);

}  // namespace lacsim::sweep
