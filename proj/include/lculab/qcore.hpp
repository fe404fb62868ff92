#pragma once

// Dense statevector and unitary-operator algebra.
//
// Registers are ordered ancilla-major: in a composite index
// `ancilla * system_dim + system`, the ancilla varies slowest.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lculab/errors.hpp"

namespace lculab {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kUnitaryTol = 1e-8;
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kNormTol = 1e-10;
inline constexpr double kZeroNorm = 1e-14;

/// Abstract resource counts. Oracle queries and input preparations are the
/// quantities the complexity claims are about; the simulator itself applies
/// matrices directly.
struct CostLedger {
  std::uint64_t oracle_queries = 0;
  std::uint64_t input_preps = 0;
  std::uint64_t elementary_ops = 0;
  std::uint64_t estimator_samples = 0;

  CostLedger& operator+=(const CostLedger& other);
  friend CostLedger operator+(CostLedger lhs, const CostLedger& rhs) { return lhs += rhs; }
  bool operator==(const CostLedger&) const = default;

  CostLedger times(std::uint64_t factor) const;
  std::uint64_t total() const;
};

/// Seeded 64-bit Mersenne Twister with portable uniform draws. Identical
/// seeds give identical streams on every platform.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  /// Standard normal (Box-Muller on `uniform`).
  double normal();
  /// Independent stream derived from this source's seed and `stream`.
  RandomSource fork(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// Normalized complex amplitude vector.
class StateVector {
 public:
  /// The one-dimensional state (1).
  StateVector() : amps_(CVector::Ones(1)) {}

  /// Normalizes `raw`. Throws ZeroVector if its norm is below 1e-14.
  static StateVector from_raw(CVector raw);
  static StateVector from_real(std::span<const double> raw);
  static StateVector basis(std::size_t dim, std::size_t index);
  static StateVector uniform(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const CVector& amplitudes() const { return amps_; }
  Complex operator[](std::size_t k) const { return amps_[static_cast<Eigen::Index>(k)]; }

  bool is_real(double tol = kNormTol) const;
  StateVector negated() const;

 private:
  explicit StateVector(CVector normalized) : amps_(std::move(normalized)) {}
  CVector amps_;
};

StateVector new_state(CVector raw);

namespace detail {
class OpNode;
}

/// Square unitary with a cost tag (the cost of applying it once).
///
/// Operators are immutable expression trees. Dense matrices are one leaf
/// kind among several structured ones (diagonals, Householder reflections,
/// planar rotations, block diagonals, Kronecker products), which keeps
/// application O(dim) for the large search registers. `matrix()`
/// materializes the dense form.
class UnitaryOp {
 public:
  /// Validates ||U^dag U - I||_max <= 1e-8.
  static UnitaryOp dense(CMatrix matrix, CostLedger cost = {});
  static UnitaryOp identity(std::size_t dim);
  /// diag(entries); every entry must have modulus 1.
  static UnitaryOp diagonal(CVector entries, CostLedger cost = {});
  /// phase * (I - 2|w><w|) with w a unit vector (or zero, giving phase * I).
  static UnitaryOp reflection(CVector w, Complex phase = 1.0, CostLedger cost = {});
  /// Rotation by `angle` in span{e1, e2} (e1 turning towards e2); identity
  /// on the orthogonal complement. e1, e2 must be orthonormal.
  static UnitaryOp plane_rotation(CVector e1, CVector e2, double angle, CostLedger cost = {});
  /// Block-diagonal sum; cost defaults to the sum of the block costs.
  static UnitaryOp block_diagonal(std::vector<UnitaryOp> blocks,
                                  std::optional<CostLedger> cost = std::nullopt);
  /// outer (x) inner with the outer register varying slowest.
  static UnitaryOp kron(const UnitaryOp& outer, const UnitaryOp& inner);
  /// Applies `factors` first to last; cost is the sum.
  static UnitaryOp product(std::vector<UnitaryOp> factors);
  /// Real rotation of a two-level ancilla (the outer register) controlled by
  /// the inner register index j: |0>|j> -> c_j|0>|j> + s_j|1>|j>.
  static UnitaryOp controlled_ancilla_rotation(RVector cosines, RVector sines, CostLedger cost = {});

  std::size_t dim() const;
  const CostLedger& cost() const { return cost_; }
  UnitaryOp with_cost(CostLedger cost) const;
  std::string kind() const;

  CVector act(const CVector& v) const;
  CMatrix matrix() const;
  UnitaryOp adjoint() const;

 private:
  UnitaryOp(std::shared_ptr<const detail::OpNode> node, CostLedger cost)
      : node_(std::move(node)), cost_(cost) {}

  std::shared_ptr<const detail::OpNode> node_;
  CostLedger cost_;
};

/// Dense Hermitian matrix (||A - A^dag||_max <= 1e-10).
class HermitianOp {
 public:
  static HermitianOp from_matrix(CMatrix matrix);
  const CMatrix& matrix() const { return matrix_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }

 private:
  explicit HermitianOp(CMatrix m) : matrix_(std::move(m)) {}
  CMatrix matrix_;
};

/// exp(-i A t), built from the eigendecomposition of A.
UnitaryOp evolve(const HermitianOp& generator, double t, CostLedger cost = {});

/// A state together with the cost of preparing it once.
struct PreparedState {
  StateVector state;
  CostLedger cost;
};

PreparedState prepared(StateVector state, std::uint64_t input_preps = 1);

/// Returns U * s and adds U.cost() to `ledger`.
StateVector apply(const UnitaryOp& op, const StateVector& s, CostLedger& ledger);
StateVector apply(const UnitaryOp& op, const StateVector& s);

Complex inner(const StateVector& a, const StateVector& b);
double fidelity(const StateVector& a, const StateVector& b);

StateVector tensor(const StateVector& outer, const StateVector& inner);
UnitaryOp tensor_op(const UnitaryOp& outer, const UnitaryOp& inner);

using Histogram = std::map<std::size_t, std::uint64_t>;

/// Samples `shots` computational-basis outcomes.
Histogram measure(const StateVector& s, std::uint64_t shots, RandomSource& rng);
/// One basis outcome.
std::size_t measure_once(const StateVector& s, RandomSource& rng);

/// Splits a dimension as ancilla_dim x system_dim (ancilla-major).
struct RegisterSplit {
  std::size_t ancilla_dim;
  std::size_t system_dim;
};

struct PostSelection {
  double probability;
  StateVector state;
};

/// Squared norm of the block where the ancilla register equals `value`.
double branch_probability(const StateVector& s, RegisterSplit split, std::size_t value);
/// Projects onto ancilla == `value` and renormalizes. Throws
/// ZeroProbability when the branch has probability below 1e-14.
PostSelection postselect(const StateVector& s, RegisterSplit split, std::size_t value);

/// I - 2|v><v|.
UnitaryOp reflect_about(const StateVector& v, CostLedger cost = {});

/// Householder unitary U with U|0> = target exactly (phase included).
UnitaryOp householder_prep(const StateVector& target, CostLedger cost = {});

/// Subspace spanned by a set of computational basis states.
class GoodSubspace {
 public:
  static GoodSubspace range(std::size_t dim, std::size_t begin, std::size_t end);
  static GoodSubspace indices(std::size_t dim, std::span<const std::size_t> members);

  std::size_t dim() const { return mask_.size(); }
  bool contains(std::size_t k) const { return mask_[k] != 0; }
  double probability(const StateVector& s) const;
  /// Diagonal sign flip on the subspace.
  UnitaryOp phase_flip(CostLedger cost = {}) const;

 private:
  explicit GoodSubspace(std::vector<char> mask) : mask_(std::move(mask)) {}
  std::vector<char> mask_;
};

struct Amplified {
  StateVector state;
  std::uint64_t rounds;
  double good_probability;
};

/// floor(pi / (4 asin(a))) for 0 < a <= 1.
std::uint64_t amplification_rounds(double amplitude);

/// Standard amplitude amplification of A|initial> towards `good`, using the
/// known good-subspace amplitude. The ledger accrues (2k+1) uses of A plus
/// one elementary op per subspace flip.
Amplified amplitude_amplify(const UnitaryOp& a, const GoodSubspace& good, double known_amplitude,
                            const StateVector& initial, CostLedger& ledger);

/// max |U^dag U - I|.
double unitarity_defect(const CMatrix& m);
/// Spectral norm (largest singular value).
double spectral_norm(const CMatrix& m);

}  // namespace lculab
