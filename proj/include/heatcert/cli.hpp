#pragma once

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <thread>

#include "heatcert/config.hpp"
#include "heatcert/report.hpp"
#include "heatcert/verify.hpp"

namespace heatcert {

/// Process exit codes of the command-line tool.
enum ExitCode : int { kVerifiedToEnd = 0, kUsageOrIoError = 1, kStoppedEarly = 2 };

/// Worker cap from HEATCERT_THREADS; unset means the hardware concurrency.
inline int threads_from_env() {
  const char* v = std::getenv("HEATCERT_THREADS");
  if (!v || !*v) return std::max(1u, std::thread::hardware_concurrency());
  try {
    const int n = detail::parse_number<int>("HEATCERT_THREADS", v);
    if (n < 1) throw ConfigError("HEATCERT_THREADS must be a positive integer");
    return n;
  } catch (const ConfigError&) {
    throw ConfigError("HEATCERT_THREADS must be a positive integer");
  }
}

/// Loads the config, solves, verifies, and writes the artifacts.
inline int run_command(const std::filesystem::path& config_path, const std::optional<std::filesystem::path>& output_dir,
                       int threads, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config = load_config(config_path);
  } catch (const ConfigError& e) {
    err << "error: " << config_path.string() << ": " << e.what() << '\n';
    return kUsageOrIoError;
  }
  if (output_dir) config.output_dir = *output_dir;

  const auto start = std::chrono::steady_clock::now();
  const VerificationRun run = concatenate(config.initial_data(), config.params(), config.options(threads));
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  try {
    write_artifacts(config.output_dir, run, config, wall);
  } catch (const ArtifactError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageOrIoError;
  }
  out << "last verified time " << shortest(run.last_verified_time()) << " of T = " << shortest(config.T) << " ("
      << to_string(config.mode) << ", " << run.certificates.size() << " certificates, " << shortest(wall) << " s)\n";
  if (!run.reached_end()) {
    out << "stopped early: " << run.certificates.back().reason << '\n';
    return kStoppedEarly;
  }
  return kVerifiedToEnd;
}

inline int compare_command(const std::filesystem::path& a, const std::filesystem::path& b, std::ostream& out,
                           std::ostream& err) {
  try {
    compare_runs(read_artifacts(a), read_artifacts(b), out);
  } catch (const ArtifactError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageOrIoError;
  }
  return kVerifiedToEnd;
}

}  // namespace heatcert
