#include "lacsim/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/format.h>

namespace lacsim::sweep {

namespace {

constexpr double kSignalFloor = 1e-12;

bool strictly_monotonic(const std::vector<double>& grid) {
  if (grid.size() < 2) return true;
  const bool increasing = grid[1] > grid[0];
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (increasing ? !(grid[i] > grid[i - 1]) : !(grid[i] < grid[i - 1])) return false;
  }
  return true;
}

SpectrumRow run_point(const OperatingPoint& op, const ConvergenceSpec& convergence,
                      double axis_value) {
  SpectrumRow row;
  row.axis_value = axis_value;
  try {
    const PointResult r = converge_n(op, convergence);
    row.x = r.point.x;
    row.y = r.point.y;
    row.x_opt = r.point.x;
    row.n_used = r.n_used;
    row.residual = r.residual;
    row.converged = r.converged;
    row.ok = true;
  } catch (const std::exception& e) {
    row.x = row.y = row.x_opt = std::numeric_limits<double>::quiet_NaN();
    row.error = e.what();
  }
  return row;
}

class ProgressReporter {
 public:
  ProgressReporter(const ProgressFn& fn, std::size_t total) : fn_(fn), total_(total) {}

  void tick() {
    if (!fn_) return;
    std::lock_guard lock(mutex_);
    fn_(++done_, total_);
  }

 private:
  const ProgressFn& fn_;
  std::size_t total_;
  std::size_t done_ = 0;
  std::mutex mutex_;
};

}  // namespace

void ConvergenceSpec::validate() const {
  if (!(target_rel_change > 0.0) || !std::isfinite(target_rel_change)) {
    throw InvalidArgument("convergence: target_rel_change must be positive");
  }
  if (n_start < 4) throw InvalidArgument("convergence: n_start must be at least 4");
  if (n_max < n_start) throw InvalidArgument("convergence: n_max must be >= n_start");
}

void SweepPlan::validate() const {
  if (grid.empty()) throw InvalidArgument("sweep: grid is empty");
  if (!strictly_monotonic(grid)) throw InvalidArgument("sweep: grid must be strictly monotonic");
  for (double v : grid) {
    if (!std::isfinite(v)) throw InvalidArgument("sweep: grid values must be finite");
    if (axis == SweepAxis::FMod && v <= 0.0) {
      throw InvalidArgument("sweep: f_mod grid values must be positive");
    }
  }
  if (axis == SweepAxis::FMod && !inner_grid.empty() && !strictly_monotonic(inner_grid)) {
    throw InvalidArgument("sweep: inner grid must be strictly monotonic");
  }
  convergence.validate();
  base.system.validate();
  base.relax.validate();
}

std::vector<double> default_inner_grid(const spinops::SpinSystemSpec& system) {
  double scale = std::max({std::abs(system.v_perturbation), std::abs(system.a_iso),
                           std::abs(system.d_dd)});
  if (scale == 0.0) scale = 0.1;
  const double half_width = 10.0 * scale;
  constexpr int kPoints = 101;
  std::vector<double> grid(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    grid[i] = -half_width + 2.0 * half_width * i / (kPoints - 1);
  }
  grid[kPoints / 2] = 0.0;
  return grid;
}

PointResult evaluate_point(const OperatingPoint& op, long n_steps) {
  periodic::DriveSpec drive = op.drive;
  drive.n_steps = n_steps;
  const periodic::PeriodCache cache = periodic::build_period(op.system, op.relax, drive);
  const periodic::SteadyState ss = periodic::solve_steady_state(cache);
  const auto [x, y] = cache.quadratures(ss.rho);
  PointResult result;
  result.point = {x, y, drive.omega0, drive.f_mod};
  result.n_used = n_steps;
  result.converged = false;
  result.residual = ss.residual;
  return result;
}

PointResult converge_n(const OperatingPoint& op, const ConvergenceSpec& convergence) {
  convergence.validate();
  PointResult current = evaluate_point(op, convergence.n_start);
  while (current.n_used < convergence.n_max) {
    const long next_n = std::min(current.n_used * 2, convergence.n_max);
    PointResult refined = evaluate_point(op, next_n);
    const double change =
        std::hypot(refined.point.x - current.point.x, refined.point.y - current.point.y);
    const double scale = std::max(refined.point.magnitude(), kSignalFloor);
    if (change / scale < convergence.target_rel_change) {
      current.converged = true;
      return current;
    }
    current = refined;
  }
  current.converged = false;
  return current;
}

std::vector<lockin::LockinPoint> Spectrum::points() const {
  std::vector<lockin::LockinPoint> out;
  for (const SpectrumRow& row : rows) {
    if (row.ok) out.push_back({row.x, row.y, row.axis_value, 0.0});
  }
  return out;
}

void finalize_spectrum(Spectrum& spectrum) {
  spectrum.failures = 0;
  spectrum.not_converged = 0;
  for (const SpectrumRow& row : spectrum.rows) {
    if (!row.ok) ++spectrum.failures;
    else if (!row.converged) ++spectrum.not_converged;
  }
  const std::vector<lockin::LockinPoint> pts = spectrum.points();
  spectrum.flat = false;
  try {
    const lockin::PhaseAmplitude best = lockin::optimal_phase_amplitude(pts);
    spectrum.phi_star = best.phi_star;
    spectrum.peak_to_peak = best.peak_to_peak;
  } catch (const FlatSpectrum&) {
    spectrum.flat = true;
    spectrum.phi_star = 0.0;
    spectrum.peak_to_peak = lockin::peak_to_peak(pts, 0.0);
  }
  for (SpectrumRow& row : spectrum.rows) {
    if (row.ok) row.x_opt = lockin::rotate_phase({row.x, row.y}, spectrum.phi_star);
  }
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(resolve_threads(threads)), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

Spectrum field_sweep(const SweepPlan& plan, const SweepOptions& options) {
  if (plan.axis != SweepAxis::Omega0) throw InvalidArgument("field_sweep: axis must be omega0");
  plan.validate();
  Spectrum spectrum;
  spectrum.rows.resize(plan.grid.size());
  ProgressReporter progress(options.progress, plan.grid.size());
  parallel_for(plan.grid.size(), options.threads, [&](std::size_t i) {
    OperatingPoint op = plan.base;
    op.drive.omega0 = plan.grid[i];
    spectrum.rows[i] = run_point(op, plan.convergence, plan.grid[i]);
    progress.tick();
  });
  finalize_spectrum(spectrum);
  return spectrum;
}

std::vector<AmplitudeRow> fm_sweep(const SweepPlan& plan, const SweepOptions& options) {
  if (plan.axis != SweepAxis::FMod) throw InvalidArgument("fm_sweep: axis must be f_mod");
  plan.validate();
  const std::vector<double> inner =
      plan.inner_grid.empty() ? default_inner_grid(plan.base.system) : plan.inner_grid;
  const std::size_t n_inner = inner.size();
  const std::size_t total = plan.grid.size() * n_inner;

  std::vector<Spectrum> spectra(plan.grid.size());
  for (Spectrum& s : spectra) s.rows.resize(n_inner);
  ProgressReporter progress(options.progress, total);
  parallel_for(total, options.threads, [&](std::size_t flat) {
    const std::size_t fi = flat / n_inner;
    const std::size_t wi = flat % n_inner;
    OperatingPoint op = plan.base;
    op.drive.f_mod = plan.grid[fi];
    op.drive.omega0 = inner[wi];
    spectra[fi].rows[wi] = run_point(op, plan.convergence, inner[wi]);
    progress.tick();
  });

  std::vector<AmplitudeRow> curve;
  curve.reserve(plan.grid.size());
  for (std::size_t fi = 0; fi < plan.grid.size(); ++fi) {
    Spectrum& s = spectra[fi];
    finalize_spectrum(s);
    AmplitudeRow row;
    row.f_mod = plan.grid[fi];
    row.peak_to_peak = s.peak_to_peak;
    row.phi_star = s.phi_star;
    row.failures = s.failures;
    row.not_converged = s.not_converged;
    for (const SpectrumRow& r : s.rows) row.n_used_max = std::max(row.n_used_max, r.n_used);
    curve.push_back(row);
  }
  return curve;
}

}  // namespace lacsim::sweep
