#pragma once

// Command-line front end: configuration, vector ingestion and record output.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lculab/errors.hpp"
#include "lculab/prep.hpp"

namespace lculab {

struct RunConfig {
  std::string command;  // lcu | fracpow | grover | prep | bench
  std::string method;   // empty selects the command's default
  std::string suite = "table1";
  std::size_t n = 0;    // search size N (grover), vector length is taken from the file
  std::size_t m = 0;
  std::size_t dim = 8;
  std::vector<double> coeffs;
  bool orthonormal = false;
  std::optional<double> eps;
  std::optional<unsigned> bits;
  std::optional<std::uint64_t> max_k;
  std::uint64_t shots = 1;
  std::uint64_t seed = 0;
  std::uint64_t seeds = 5;
  double t = 0.25;
  std::optional<std::size_t> marked;
  std::string file;
  std::vector<double> values;
  std::string format = "json";
  std::string cost_model = "sampling";
  std::string angle_mode = "exact";
  std::string variant = "pe";
  bool amplify = false;
  std::string out;
  bool timing = false;
  unsigned threads = 1;
};

/// Parses either a JSON array of numbers or whitespace-separated decimals.
/// Throws InputParseError (with line and column) for malformed or
/// non-finite input.
std::vector<double> parse_vector_text(std::string_view text);
ClassicalVector parse_vector(const std::string& path);

/// 10 + the error kind's ordinal; 0 is success, 1 is reserved for
/// unexpected failures, 2 for usage errors reported by the argument parser.
int exit_code(ErrorKind kind);

/// Checks every numeric parameter. Throws ConfigError.
void validate(const RunConfig& config);

/// Executes one configured command, writing records to `out`. Returns the
/// process exit status; failures are written as an error record.
int run(const RunConfig& config, std::ostream& out);

/// Full entry point: parses `args` (without the program name), reads
/// LCULAB_THREADS, runs, and writes to `out` or the --out path.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lculab
