#pragma once

// Command-line front end: symbols, propagate, compare, scan, discrete.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cohprop/semiclassical.hpp"

namespace cohprop::cli {

enum class Command { Symbols, Propagate, Compare, Scan, Discrete };
enum class Format { Text, Json, Csv };

enum ExitCode : int { kOk = 0, kConfigError = 2, kAllFailed = 3, kPartialFailure = 4 };

struct ConfigError : Error {
  using Error::Error;
};

struct TimeRange {
  double start = 0.0;
  double stop = 0.0;
  int count = 0;

  std::vector<double> points() const;  // count points, endpoints included
};

struct RunConfig {
  Command command = Command::Propagate;
  std::string hamiltonian;
  double hbar = 1.0, mass = 1.0, omega = 1.0;
  cplx z1{}, z2{};
  std::optional<double> time;
  std::optional<TimeRange> time_range;
  std::vector<Method> methods;  // empty: command default
  std::vector<int> n_list{16, 32, 64, 128};
  double tol_shoot = 1e-11;
  double tol_ode = 1e-10;
  double tol_trunc = 1e-8;
  int grid_size = 5;
  std::optional<double> grid_spread;
  int continuation = 0;         // endpoint-homotopy stages, 0 = off
  bool principal_only = false;  // sum only the continued saddle
  std::string output;  // empty: standard output
  std::optional<Format> format;
  int jobs = 0;        // 0: available parallelism
  bool strict = false;
};

// Parses argv (argv[0] is the program name). A --config file of key=value
// lines supplies defaults that command-line flags override. Returns nullopt
// when help was printed. Throws ConfigError.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out);

cplx parse_complex(const std::string& text);
TimeRange parse_time_range(const std::string& text);
std::vector<Method> parse_methods(const std::string& text);
std::vector<int> parse_n_list(const std::string& text);

// Validates the config against its command. Throws ConfigError.
void validate(const RunConfig& config);

// Runs a validated config; returns an ExitCode.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// parse_args + validate + run with error reporting and exit-code mapping.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cohprop::cli
