#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace runckel::cli {

enum ExitCode : int { kOk = 0, kFailed = 1, kInvalidConfig = 2, kPrecisionExhausted = 3 };

/// Fully resolved run configuration; echoed into every output document.
struct RunConfig {
  std::string command;
  std::optional<int> p;
  double z_re = 0.0;
  double z_im = 0.0;
  std::optional<double> constant_g;
  std::vector<double> g;
  long k = 1;
  std::optional<double> r_re;
  std::optional<double> r_im;
  long long n_max = 100000;
  double tol = 1e-3;
  double identity_tol = 1e-10;
  int precision_bits = 53;
  std::string output_format = "csv";
  std::string output_path = "-";
  std::uint64_t seed = 1;
  long long trials = 100;
  long long max_n = 50;
  bool inject_fault = false;
  long long window = 50;
  long long min_alternations = 10;
};

/// Parses `args` (without the program name) and runs the selected command.
/// Documents go to `out` unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace runckel::cli
