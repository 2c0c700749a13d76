// lacsim: periodic steady states and lock-in spectra of field-modulated spin systems.
//
//   lacsim --config run.json [--output out.csv] [--threads k] [--verbose]
//
// The subcommand (levels, trace, spectrum, fmsweep) is part of the config.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lacsim/config.hpp"

namespace {

constexpr const char* kThreadsEnv = "LACSIM_THREADS";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw lacsim::Error("cannot read config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int threads_from_env() {
  const char* value = std::getenv(kThreadsEnv);
  if (value == nullptr || *value == '\0') return 0;
  char* end = nullptr;
  const long n = std::strtol(value, &end, 10);
  if (*end != '\0' || n < 0) {
    throw lacsim::Error(std::string(kThreadsEnv) + " must be a non-negative integer");
  }
  return static_cast<int>(n);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lock-in LAC spectra of field-modulated spin systems"};
  std::string config_path;
  std::string output_path;
  int threads = -1;
  bool verbose = false;
  app.add_option("--config", config_path,
                 "Run configuration (JSON, or a previous output CSV whose echoed config is reused)")
      ->required();
  app.add_option("--output", output_path, "Output CSV path (overrides the config)");
  app.add_option("--threads", threads, "Worker threads, 0 = auto (default: $LACSIM_THREADS or auto)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--verbose", verbose, "Report progress on standard error");
  CLI11_PARSE(app, argc, argv);

  try {
    std::string text = read_file(config_path);
    if (auto echoed = lacsim::cli::extract_config_echo(text)) text = *echoed;
    lacsim::cli::RunConfig config = lacsim::cli::parse_config(text);
    if (!output_path.empty()) config.output_path = output_path;

    lacsim::cli::RunOptions options;
    options.threads = threads >= 0 ? threads : threads_from_env();
    options.verbose = verbose;
    options.log = &std::cerr;
    const int status = lacsim::cli::run(config, options);
    if (verbose) std::cerr << "wrote " << config.output_path << '\n';
    return status;
  } catch (const std::exception& e) {
    std::cerr << "lacsim: " << e.what() << '\n';
    return 1;
  }
}
