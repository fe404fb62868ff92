#pragma once

// Encoding a classical real vector x as the state x / ||x||.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lculab/lcu.hpp"
#include "lculab/qcore.hpp"

namespace lculab {

class ClassicalVector {
 public:
  /// Throws InvalidArgument for non-finite entries and ZeroVector when every
  /// entry is zero.
  static ClassicalVector from(std::span<const double> entries);

  const std::vector<double>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  double max_abs() const { return max_abs_; }
  double min_abs_nonzero() const { return min_abs_; }
  double norm() const { return norm_; }
  /// max |x_k| / min nonzero |x_k|.
  double kappa() const { return max_abs_ / min_abs_; }
  const std::vector<std::size_t>& support() const { return support_; }

  StateVector state() const;

 private:
  ClassicalVector() = default;
  std::vector<double> entries_;
  std::vector<std::size_t> support_;
  double max_abs_ = 0.0;
  double min_abs_ = 0.0;
  double norm_ = 0.0;
};

struct PrepReport {
  std::string method;
  StateVector output;
  /// Against x / ||x||.
  double fidelity = 0.0;
  /// Per-attempt success probability of the outermost post-selection.
  double success_probability = 1.0;
  double expected_attempts = 1.0;
  std::uint64_t attempts = 1;
  /// Largest expected attempt count among the inner preparations (bins, or
  /// the two shifted vectors).
  double inner_expected_attempts = 1.0;
  std::uint64_t amplification_rounds = 0;
  CostLedger ledger;
  double kappa = 1.0;
  std::size_t q = 0;
  std::optional<double> bound_ratio;
  std::optional<bool> bound_holds;
};

struct NaivePrep {
  UnitaryOp unitary;
  StateVector state;
  CostLedger ledger;
};

/// Householder unitary with first column x / ||x||, charged n^2 elementary ops.
NaivePrep prep_naive(const ClassicalVector& x);

enum class UniformishCircuit {
  /// Uniform superposition over the support, then an ancilla rotation with
  /// amplitude x_j / max|x| controlled by the same register.
  merged,
  /// The generic multi-state circuit with |x_j> = |j>, which carries an extra
  /// 1/sqrt(n') in the success amplitude.
  literal,
};

/// Amplitude-rotation preparation. Success amplitude per attempt is
/// ||x|| / (sqrt(n') max|x|) for the merged circuit.
PrepReport prep_uniformish(const ClassicalVector& x, RandomSource& rng, bool use_amplification,
                           UniformishCircuit circuit = UniformishCircuit::merged);

struct BinDecomposition {
  std::size_t q = 0;
  /// Dense length-n vectors with disjoint supports; entries are copied from x.
  std::vector<std::vector<double>> bins;
  /// [lo, hi) magnitude ranges; the last one is closed.
  std::vector<std::pair<double, double>> intervals;
  /// ||y_j|| / ||x||.
  std::vector<double> lambdas;
};

/// q is the least q >= 1 with max|x| <= 2^q min|x|; bin j holds the entries
/// with magnitude in [2^(j-1) min, 2^j min).
BinDecomposition decompose_bins(const ClassicalVector& x);

/// Each non-empty bin via prep_uniformish, then a weighted combine with
/// weights lambda_j.
PrepReport prep_thm1(const ClassicalVector& x, RandomSource& rng);

/// x = z - y with y = M sign(x), M = max|x|, sign(0) = +1.
struct SignShift {
  double m = 0.0;
  std::vector<double> y;
  /// z = x + y held as an unevaluated sum z_hi + z_lo (exact).
  std::vector<double> z_hi;
  std::vector<double> z_lo;
  double norm_y = 0.0;
  double norm_z = 0.0;
  double norm_x = 0.0;

  /// (||y||^2 + ||z||^2) / ||x||^2.
  double bound_ratio() const;
};

SignShift sign_shift(const ClassicalVector& x);

/// Prepares |y> and |z> and combines ||z|| |z> - ||y|| |y> by a fractional
/// rotation. Reports the ratio against 3 kappa^2 + 1 in bound_ratio /
/// bound_holds.
PrepReport prep_thm2(const ClassicalVector& x, double epsilon, RotationVariant variant, RandomSource& rng,
                     const RotationOptions& options = {});

enum class PrepMethod { naive, prop2, prop2_literal, thm1, thm2 };

std::string_view to_string(PrepMethod m);
PrepMethod parse_prep_method(std::string_view name);

struct PrepBenchOptions {
  double epsilon = 1e-2;
  RotationVariant variant = RotationVariant::pe;
  bool use_amplification = false;
  unsigned threads = 1;
};

struct PrepRecord {
  std::size_t vector_index = 0;
  bool ok = true;
  std::string error;
  PrepReport report;
};

/// Runs every method on every vector. Vector i uses an rng stream derived
/// from (seed, i); records are ordered by (vector, method).
std::vector<PrepRecord> prep_bench(const std::vector<ClassicalVector>& corpus, std::span<const PrepMethod> methods,
                                   std::uint64_t seed, const PrepBenchOptions& options = {});

PrepReport run_prep(const ClassicalVector& x, PrepMethod method, RandomSource& rng,
                    const PrepBenchOptions& options = {});

}  // namespace lculab
