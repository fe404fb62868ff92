#pragma once

// Linear combination of quantum states: prepare a state proportional to
// sum_j alpha_j |x_j> from preparable states |x_j> and real weights.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lculab/estimate.hpp"
#include "lculab/fracpow.hpp"
#include "lculab/qcore.hpp"

namespace lculab {

enum class CombineMethod {
  hadamard,
  rotation_eig,
  rotation_pe,
  rotation_iterate,
  multi_v1,
  multi_v2,
  recursive,
};

enum class RotationVariant { eig, pe, iterate };

/// How the pairwise rotation angles and tree coefficients are obtained.
enum class AngleMode { exact, estimated };

std::string_view to_string(CombineMethod m);
std::string_view to_string(RotationVariant v);
CombineMethod parse_combine_method(std::string_view name);
RotationVariant parse_rotation_variant(std::string_view name);

/// One pairwise combination inside a recursive tree (or the single pair of a
/// two-state rotation combine).
struct TraceNode {
  std::size_t level = 0;
  std::size_t index = 0;
  double alpha_left = 0.0;
  double alpha_right = 0.0;
  double phi = 0.0;    // angle between the two states
  double theta = 0.0;  // angle from the left state to the target
  double t = 0.0;      // fractional power of the 2 phi rotation
  double combined_alpha = 0.0;
  bool passthrough = false;
  bool reversed = false;
};

struct CombineReport {
  StateVector output;
  /// Fidelity against the exactly computed normalized sum.
  double target_fidelity = 0.0;
  /// Exact per-attempt success probability of the delivered branch (1 for
  /// deterministic methods; after amplification when it is used).
  double success_probability = 1.0;
  std::uint64_t attempts = 1;
  std::uint64_t amplification_rounds = 0;
  CostLedger ledger;
  std::vector<TraceNode> tree_trace;
  /// Rotation routes: integer iterate count / phase bits actually used.
  std::uint64_t iterate_k = 0;
  unsigned bits = 0;
};

struct RotationOptions {
  AngleMode angle_mode = AngleMode::exact;
  CostModel cost_model = CostModel::sampling;
  /// Overrides the phase-estimation bits derived from epsilon.
  std::optional<unsigned> bits;
  /// Overrides the integer-iterate scan limit derived from the tolerance.
  std::optional<std::uint64_t> max_k;
};

/// Retry cap for post-selective methods.
inline constexpr std::uint64_t kMaxAttempts = 1'000'000;

/// Runs a post-selective circuit from |0>, optionally amplified, and samples
/// attempts until the leading `system_dim` block is selected. The closed-form
/// success probability is checked against the circuit when amplifying.
CombineReport run_postselective(const UnitaryOp& circuit, std::size_t system_dim, double closed_form_p,
                                const StateVector& target, RandomSource& rng, bool use_amplification);

/// Directly computed normalized sum_j alpha_j x_j. Throws ZeroSum if the sum
/// has norm below 1e-12.
StateVector exact_combination(std::span<const StateVector> states, std::span<const double> coeffs);

struct WeightedAngles {
  double phi;    // angle between a and b
  double theta;  // angle between a and the target
  double t;      // theta / (2 phi), in [0, 1/2]
};

/// Angles for preparing alpha|a> + beta|b> (alpha, beta >= 0) from the
/// overlap <a|b>.
WeightedAngles weighted_angles(const StateVector& a, const StateVector& b, double alpha, double beta);
WeightedAngles weighted_angles_from_overlap(double overlap, double alpha, double beta);

/// Phase bits giving a rotation-angle error of at most sqrt(epsilon) / 2.
unsigned bits_for_epsilon(double epsilon);
/// Angle tolerance whose squared cosine is 1 - epsilon.
double tolerance_for_epsilon(double epsilon);

/// Hadamard-test combination of a + b with an ancilla qubit, either by
/// repeated post-selection or by amplitude amplification.
CombineReport combine2_hadamard(const PreparedState& a, const PreparedState& b, RandomSource& rng,
                                bool use_amplification);

/// alpha|a> + beta|b> by a fractional power of
/// R = (I - 2|b><b|)(I - 2|a><a|) applied to |a>. Negative weights are
/// absorbed into the states.
CombineReport combine2_rotation(const PreparedState& a, const PreparedState& b, double alpha, double beta,
                                double epsilon, RotationVariant variant, RandomSource& rng,
                                const RotationOptions& options = {});

/// Uniform index register, controlled preparation, controlled ancilla
/// rotation by alpha_j / max|alpha|, index un-preparation; post-select
/// index = 0 and ancilla = 0.
CombineReport combine_multi_v1(std::span<const PreparedState> states, std::span<const double> coeffs,
                               RandomSource& rng, bool use_amplification);

/// S (x) I, controlled preparation, S^dag (x) I with
/// S|0> = s^{-1/2} sum_j sqrt(alpha_j)|j>; post-select index = 0.
CombineReport combine_multi_v2(std::span<const PreparedState> states, std::span<const double> coeffs,
                               RandomSource& rng, bool use_amplification);

/// Pairwise tree of two-state rotation combines at precision epsilon0.
CombineReport combine_recursive(std::span<const PreparedState> states, std::span<const double> coeffs,
                                double epsilon0, RotationVariant variant, RandomSource& rng,
                                const RotationOptions& options = {});

struct CombineRequest {
  std::vector<PreparedState> states;
  std::vector<double> coeffs;
  CombineMethod method = CombineMethod::multi_v2;
  double epsilon = 1e-2;
  bool use_amplification = false;
  RotationOptions rotation;
};

/// Dispatches on `method`. For `recursive`, epsilon is the overall target
/// and every tree node runs at epsilon / m.
CombineReport combine(const CombineRequest& request, RandomSource& rng);

/// Closed forms for the post-selection probabilities.
double v1_success_closed_form(std::span<const StateVector> states, std::span<const double> coeffs);
double v2_success_closed_form(std::span<const StateVector> states, std::span<const double> coeffs);

struct Table1Cell {
  std::size_t m = 2;
  std::size_t dim = 8;
  std::string profile;  // label only
  std::vector<double> coeffs;
  bool orthonormal = false;
};

struct Table1Row {
  Table1Cell cell;
  std::string method;
  bool ok = true;
  std::string error;
  double success_probability = 0.0;
  double expected_attempts = 0.0;
  std::uint64_t attempts = 0;
  CostLedger ledger;
  double fidelity = 0.0;
};

/// Runs multi-v1, multi-v2 and the recursive tree on every cell. Each cell
/// draws its states from an rng stream derived from (seed, cell index), so
/// results do not depend on `threads`.
std::vector<Table1Row> table1_bench(const std::vector<Table1Cell>& grid, std::uint64_t seed, double epsilon,
                                    unsigned threads = 1);

/// Random real unit vectors (or the first m basis states when orthonormal).
std::vector<StateVector> random_real_states(std::size_t m, std::size_t dim, bool orthonormal, RandomSource& rng);

}  // namespace lculab
