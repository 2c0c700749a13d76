#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lacsim/liouville.hpp"
#include "lacsim/periodic.hpp"
#include "lacsim/spinops.hpp"
#include "lacsim/sweep.hpp"

namespace lacsim::cli {

enum class Subcommand { Levels, Trace, Spectrum, FmSweep };
enum class InitialState { Bright, Dark, Mixed };

const char* to_string(Subcommand s);

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Fully validated run description with every default resolved. Run
// configurations are JSON documents; see README.md for the schema.
struct RunConfig {
  Subcommand subcommand = Subcommand::Levels;
  spinops::SpinSystemSpec system;
  liouville::RelaxationSpec relaxation;
  periodic::DriveSpec drive;
  std::vector<double> grid;        // omega0 (levels, spectrum) or f_mod (fmsweep)
  std::vector<double> inner_grid;  // omega0 grid per f_mod (fmsweep)
  sweep::ConvergenceSpec convergence;
  long trace_periods = 1;
  InitialState initial_state = InitialState::Bright;
  std::string output_path;
  std::optional<double> gamma_for_units;
};

// Throws ConfigError naming the offending key.
RunConfig parse_config(std::string_view text);

// Single-line JSON echo of the effective configuration; parse_config of the
// echo reproduces the same RunConfig.
std::string effective_config_json(const RunConfig& config);

// Recovers the configuration echoed into an output file's "# config: " line.
std::optional<std::string> extract_config_echo(std::string_view csv_text);

struct RunOptions {
  int threads = 1;  // 0 = hardware concurrency
  bool verbose = false;
  std::ostream* log = nullptr;  // progress and diagnostics; null = silent
};

struct RunSummary {
  int failed_points = 0;
  int not_converged = 0;
};

// Renders the complete CSV document (comment lines, header row, data rows).
std::string render_csv(const RunConfig& config, const RunOptions& options, RunSummary& summary);

// Writes the CSV to config.output_path and returns the process exit status:
// 0 on success, 2 if any sweep point failed or did not converge. I/O errors
// throw; a partially written file is removed.
int run(const RunConfig& config, const RunOptions& options = {});

}  // namespace lacsim::cli
