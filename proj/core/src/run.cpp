#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "lacsim/config.hpp"

namespace lacsim::cli {

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

void write_preamble(std::ostream& out, const RunConfig& config) {
  out << "# lacsim " << to_string(config.subcommand) << '\n';
  out << "# config: " << effective_config_json(config) << '\n';
  if (config.gamma_for_units) {
    out << "# gamma_for_units: " << num(*config.gamma_for_units)
        << " (field = omega / gamma_for_units)\n";
  }
}

DensityMatrix initial_state(const RunConfig& config) {
  const int dim = config.system.dim();
  switch (config.initial_state) {
    case InitialState::Bright:
      // Electron alpha, nucleus (if any) unpolarized.
      if (dim == 2) return DensityMatrix::pure_basis_state(2, 0);
      {
        CMatrix rho = CMatrix::Zero(4, 4);
        rho(0, 0) = rho(1, 1) = 0.5;
        return DensityMatrix(rho);
      }
    case InitialState::Dark:
      if (dim == 2) return DensityMatrix::pure_basis_state(2, 1);
      {
        CMatrix rho = CMatrix::Zero(4, 4);
        rho(2, 2) = rho(3, 3) = 0.5;
        return DensityMatrix(rho);
      }
    case InitialState::Mixed:
      return DensityMatrix::maximally_mixed(dim);
  }
  return DensityMatrix::maximally_mixed(dim);
}

sweep::ProgressFn progress_fn(const RunOptions& options) {
  if (!options.verbose || options.log == nullptr) return {};
  std::ostream* log = options.log;
  return [log](std::size_t done, std::size_t total) {
    *log << "point " << done << '/' << total << '\n';
  };
}

void render_levels(std::ostream& out, const RunConfig& config) {
  const auto table = spinops::energy_levels(config.system, config.grid);
  out << "axis_value";
  for (int k = 1; k <= config.system.dim(); ++k) out << ",e" << k;
  out << '\n';
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << num(config.grid[i]);
    for (double e : table[i]) out << ',' << num(e);
    out << '\n';
  }
}

void render_trace(std::ostream& out, const RunConfig& config) {
  const auto trace = periodic::time_trace(config.system, config.relaxation, config.drive,
                                          initial_state(config), config.trace_periods);
  const double field_scale = config.gamma_for_units ? 1.0 / *config.gamma_for_units : 1.0;
  out << "t,field,population\n";
  for (const periodic::TracePoint& p : trace) {
    out << num(p.t) << ',' << num(p.omega * field_scale) << ',' << num(p.population) << '\n';
  }
}

sweep::SweepPlan make_plan(const RunConfig& config, sweep::SweepAxis axis) {
  sweep::SweepPlan plan;
  plan.axis = axis;
  plan.grid = config.grid;
  plan.base = {config.system, config.relaxation, config.drive};
  plan.convergence = config.convergence;
  plan.inner_grid = config.inner_grid;
  return plan;
}

void render_spectrum(std::ostream& out, const RunConfig& config, const RunOptions& options,
                     RunSummary& summary) {
  const sweep::Spectrum spectrum = sweep::field_sweep(
      make_plan(config, sweep::SweepAxis::Omega0), {options.threads, progress_fn(options)});
  summary.failed_points = spectrum.failures;
  summary.not_converged = spectrum.not_converged;
  out << "# phi_star: " << num(spectrum.phi_star) << (spectrum.flat ? " (flat spectrum)" : "")
      << '\n';
  out << "# peak_to_peak: " << num(spectrum.peak_to_peak) << '\n';
  out << "# failed_points: " << spectrum.failures << '\n';
  out << "# not_converged: " << spectrum.not_converged << '\n';
  for (std::size_t i = 0; i < spectrum.rows.size(); ++i) {
    if (!spectrum.rows[i].ok) out << "# failed " << i << ": " << spectrum.rows[i].error << '\n';
  }
  out << "omega0,x,y,x_opt,n_used\n";
  for (const sweep::SpectrumRow& row : spectrum.rows) {
    out << num(row.axis_value) << ',' << num(row.x) << ',' << num(row.y) << ','
        << num(row.x_opt) << ',' << row.n_used << '\n';
  }
}

void render_fmsweep(std::ostream& out, const RunConfig& config, const RunOptions& options,
                    RunSummary& summary) {
  const auto curve = sweep::fm_sweep(make_plan(config, sweep::SweepAxis::FMod),
                                     {options.threads, progress_fn(options)});
  for (const sweep::AmplitudeRow& row : curve) {
    summary.failed_points += row.failures;
    summary.not_converged += row.not_converged;
  }
  out << "# failed_points: " << summary.failed_points << '\n';
  out << "# not_converged: " << summary.not_converged << '\n';
  out << "f_mod,peak_to_peak,phi_star,n_used_max\n";
  for (const sweep::AmplitudeRow& row : curve) {
    out << num(row.f_mod) << ',' << num(row.peak_to_peak) << ',' << num(row.phi_star) << ','
        << row.n_used_max << '\n';
  }
}

}  // namespace

std::string render_csv(const RunConfig& config, const RunOptions& options, RunSummary& summary) {
  std::ostringstream out;
  write_preamble(out, config);
  switch (config.subcommand) {
    case Subcommand::Levels:
      render_levels(out, config);
      break;
    case Subcommand::Trace:
      render_trace(out, config);
      break;
    case Subcommand::Spectrum:
      render_spectrum(out, config, options, summary);
      break;
    case Subcommand::FmSweep:
      render_fmsweep(out, config, options, summary);
      break;
  }
  return out.str();
}

int run(const RunConfig& config, const RunOptions& options) {
  if (config.output_path.empty()) throw ConfigError("no output path given");
  RunSummary summary;
  // Compute everything before touching the file system.
  const std::string text = render_csv(config, options, summary);

  namespace fs = std::filesystem;
  const fs::path target(config.output_path);
  const fs::path partial = fs::path(config.output_path + ".partial");
  try {
    {
      std::ofstream file(partial, std::ios::binary | std::ios::trunc);
      if (!file) throw Error(fmt::format("cannot open '{}' for writing", partial.string()));
      file << text;
      file.flush();
      if (!file) throw Error(fmt::format("write to '{}' failed", partial.string()));
    }
    fs::rename(partial, target);
  } catch (const fs::filesystem_error& e) {
    std::error_code ignored;
    fs::remove(partial, ignored);
    throw Error(fmt::format("cannot write '{}': {}", target.string(), e.what()));
  } catch (...) {
    std::error_code ignored;
    fs::remove(partial, ignored);
    throw;
  }

  if (options.log != nullptr && (summary.failed_points > 0 || summary.not_converged > 0)) {
    *options.log << summary.failed_points << " point(s) failed, " << summary.not_converged
                 << " point(s) did not converge\n";
  }
  return (summary.failed_points > 0 || summary.not_converged > 0) ? 2 : 0;
}

}  // namespace lacsim::cli
