#pragma once

// Command-line driver: verification suites and simulation with seeded,
// reproducible JSON reports.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace sp1kepler {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int usage = 2;
inline constexpr int abort = 3;
}  // namespace exit_code

struct RunConfig {
  std::string command;
  std::size_t n = 2;
  double mu = 0.0;
  std::uint64_t seed = 7;
  std::size_t samples = 1000;
  std::optional<double> tol;  // command default when unset
  double dt = 1e-4;
  double t_end = 10.0;
  std::string method = "rk4";
  std::string output;
  std::string format = "json";
  std::string start = "bound";   // simulate: bound | radial
  std::size_t record_every = 100;
  std::string jacobi = "auto";   // verify-algebra: auto | full | sampled
  bool zero_w = false;           // quadratic / pullback: sample with W = 0
};

/// Throws std::invalid_argument with a usage message.
void validate(const RunConfig& cfg);

double default_tolerance(const std::string& command);

/// Seed streams, one per suite.
namespace stream {
inline constexpr std::uint64_t algebra = 1;
inline constexpr std::uint64_t quadratic = 3;
inline constexpr std::uint64_t pullback = 4;
inline constexpr std::uint64_t simulate = 5;
}  // namespace stream

struct CommandResult {
  int exit_code = exit_code::ok;
  nlohmann::ordered_json report;
  std::string csv;  // simulate: trajectory
};

CommandResult cmd_verify_algebra(const RunConfig& cfg);
CommandResult cmd_verify_realization(const RunConfig& cfg);
CommandResult cmd_verify_quadratic(const RunConfig& cfg);
CommandResult cmd_verify_pullback(const RunConfig& cfg);
CommandResult cmd_simulate(const RunConfig& cfg);

/// Dispatches on cfg.command after validation.
CommandResult run_command(const RunConfig& cfg);

/// Writes path.tmp and renames it over path.
void write_atomic(const std::string& path, const std::string& contents);

/// Parses args (without the program name), runs, writes output. Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sp1kepler
