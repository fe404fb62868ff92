#pragma once

// Unstructured search: the phase oracle, the standard Grover iterate, and
// search by combining the uniform state with its oracle image.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lculab/lcu.hpp"
#include "lculab/qcore.hpp"

namespace lculab {

/// Search space of size N with a marked set. The oracle is diag((-1)^[x marked])
/// and costs one oracle query per application.
class SearchInstance {
 public:
  std::size_t size() const { return n_; }
  const std::vector<std::size_t>& marked() const { return marked_; }
  std::size_t marked_count() const { return marked_.size(); }
  bool is_marked(std::size_t x) const;
  const UnitaryOp& oracle() const { return oracle_; }

 private:
  friend SearchInstance make_instance(std::size_t n, std::vector<std::size_t> marked);
  SearchInstance(std::size_t n, std::vector<std::size_t> marked, UnitaryOp oracle)
      : n_(n), marked_(std::move(marked)), oracle_(std::move(oracle)) {}

  std::size_t n_;
  std::vector<std::size_t> marked_;  // sorted, unique
  UnitaryOp oracle_;
};

/// Throws EmptyMarkedSet for an empty set and InvalidArgument for indices
/// outside [0, n).
SearchInstance make_instance(std::size_t n, std::vector<std::size_t> marked);

struct SearchResult {
  std::string method;
  std::size_t found = 0;
  bool success = false;
  std::uint64_t queries = 0;
  /// Grover iterations, amplification rounds, rotation powers or scan
  /// length, depending on the method.
  std::uint64_t iterations = 0;
  /// Exact probability mass on the marked set before measurement.
  double success_probability = 0.0;
  CostLedger ledger;
  /// State measured to produce `found` (unused by the classical scan).
  StateVector output;
};

/// floor((pi / 4) sqrt(N / M)).
std::uint64_t grover_iterations(std::size_t n, std::size_t m);

/// k Grover iterations G = (2|phi><phi| - I) O_f from the uniform state;
/// `iterations` overrides k.
SearchResult grover_standard(const SearchInstance& inst, RandomSource& rng,
                             std::optional<std::uint64_t> iterations = std::nullopt);

struct SearchStates {
  StateVector a;  // uniform superposition
  StateVector b;  // oracle image of a
};

/// a = uniform (no queries), b = O_f a (one query, charged to `ledger`).
SearchStates search_states(const SearchInstance& inst, CostLedger& ledger);

enum class SearchMethod { standard, hadamard, eig, pe, iterate, classical };

std::string_view to_string(SearchMethod m);
SearchMethod parse_search_method(std::string_view name);

struct LcuSearchOptions {
  /// epsilon = c / sqrt(N).
  double c = 0.5;
  /// Phase bits = ceil(log2 sqrt(N)) + guard_bits.
  unsigned guard_bits = 2;
  /// Iterate scan limit = max_k_factor * sqrt(N).
  double max_k_factor = 4.0;
};

/// Prepares the marked item by combining a and -b with unit weights, so that
/// the sum is exactly the marked basis state. Requires a single marked item.
SearchResult search_lcu(const SearchInstance& inst, SearchMethod method, RandomSource& rng,
                        const LcuSearchOptions& options = {});

/// Scans a random permutation of the search space until a marked item turns up.
SearchResult classical_search(const SearchInstance& inst, RandomSource& rng);

/// Dispatches to grover_standard, search_lcu or classical_search.
SearchResult run_search(const SearchInstance& inst, SearchMethod method, RandomSource& rng,
                        const LcuSearchOptions& options = {});

struct FitRecord {
  double exponent = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::vector<double> xs;
  std::vector<double> ys;
};

/// Least-squares fit of log y = exponent * log x + intercept.
FitRecord fit_power_law(std::span<const double> xs, std::span<const double> ys);

/// Mean oracle queries over `seeds` random single-marked instances for every
/// N, fitted against N. Requires at least four sizes, all powers of two.
FitRecord scaling_study(SearchMethod method, std::span<const std::size_t> sizes, std::uint64_t seeds,
                        std::uint64_t base_seed = 0, const LcuSearchOptions& options = {});

}  // namespace lculab
