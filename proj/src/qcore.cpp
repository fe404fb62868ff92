#include "lculab/qcore.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <sstream>

namespace lculab {

CostLedger& CostLedger::operator+=(const CostLedger& other) {
  oracle_queries += other.oracle_queries;
  input_preps += other.input_preps;
  elementary_ops += other.elementary_ops;
  estimator_samples += other.estimator_samples;
  return *this;
}

CostLedger CostLedger::times(std::uint64_t factor) const {
  return {oracle_queries * factor, input_preps * factor, elementary_ops * factor,
          estimator_samples * factor};
}

std::uint64_t CostLedger::total() const {
  return oracle_queries + input_preps + elementary_ops + estimator_samples;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

void check_same_dim(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) {
    std::ostringstream msg;
    msg << "state dimensions differ: " << a.dim() << " vs " << b.dim();
    fail(ErrorKind::DimMismatch, msg.str());
  }
}

}  // namespace

RandomSource::RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

double RandomSource::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t RandomSource::below(std::uint64_t n) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "below(0)");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t r = engine_();
  while (r >= limit) r = engine_();
  return r % n;
}

double RandomSource::normal() {
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

RandomSource RandomSource::fork(std::uint64_t stream) const {
  return RandomSource(splitmix64(seed_ ^ splitmix64(stream + 1)));
}

StateVector StateVector::from_raw(CVector raw) {
  const double n = raw.norm();
  if (!(n >= kZeroNorm)) fail(ErrorKind::ZeroVector, "cannot normalize a zero vector");
  raw /= n;
  return StateVector(std::move(raw));
}

StateVector StateVector::from_real(std::span<const double> raw) {
  CVector v(static_cast<Eigen::Index>(raw.size()));
  for (std::size_t k = 0; k < raw.size(); ++k) v[static_cast<Eigen::Index>(k)] = raw[k];
  return from_raw(std::move(v));
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) fail(ErrorKind::InvalidArgument, "basis index out of range");
  CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
  v[static_cast<Eigen::Index>(index)] = 1.0;
  return StateVector(std::move(v));
}

StateVector StateVector::uniform(std::size_t dim) {
  if (dim == 0) fail(ErrorKind::InvalidArgument, "dimension must be positive");
  return StateVector(CVector::Constant(static_cast<Eigen::Index>(dim),
                                       1.0 / std::sqrt(static_cast<double>(dim))));
}

bool StateVector::is_real(double tol) const {
  return amps_.imag().cwiseAbs().maxCoeff() <= tol;
}

StateVector StateVector::negated() const { return StateVector(-amps_); }

StateVector new_state(CVector raw) { return StateVector::from_raw(std::move(raw)); }

HermitianOp HermitianOp::from_matrix(CMatrix matrix) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
    fail(ErrorKind::DimMismatch, "Hermitian matrix must be square and non-empty");
  }
  const double defect = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  if (!(defect <= kHermitianTol)) fail(ErrorKind::NotHermitian, "matrix is not Hermitian");
  return HermitianOp(std::move(matrix));
}

UnitaryOp evolve(const HermitianOp& generator, double t, CostLedger cost) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(generator.matrix());
  if (es.info() != Eigen::Success) fail(ErrorKind::NumericalFailure, "Hermitian eigensolver failed");
  const RVector& lambda = es.eigenvalues();
  CVector phases(lambda.size());
  for (Eigen::Index k = 0; k < lambda.size(); ++k) phases[k] = std::polar(1.0, -lambda[k] * t);
  const CMatrix& v = es.eigenvectors();
  return UnitaryOp::dense(v * phases.asDiagonal() * v.adjoint(), cost);
}

PreparedState prepared(StateVector state, std::uint64_t input_preps) {
  CostLedger cost;
  cost.input_preps = input_preps;
  return {std::move(state), cost};
}

StateVector apply(const UnitaryOp& op, const StateVector& s, CostLedger& ledger) {
  StateVector out = StateVector::from_raw(op.act(s.amplitudes()));
  ledger += op.cost();
  return out;
}

StateVector apply(const UnitaryOp& op, const StateVector& s) {
  CostLedger discard;
  return apply(op, s, discard);
}

Complex inner(const StateVector& a, const StateVector& b) {
  check_same_dim(a, b);
  return a.amplitudes().dot(b.amplitudes());
}

double fidelity(const StateVector& a, const StateVector& b) { return std::norm(inner(a, b)); }

StateVector tensor(const StateVector& outer, const StateVector& inner) {
  const auto no = static_cast<Eigen::Index>(outer.dim());
  const auto ni = static_cast<Eigen::Index>(inner.dim());
  CVector v(no * ni);
  for (Eigen::Index i = 0; i < no; ++i) v.segment(i * ni, ni) = outer.amplitudes()[i] * inner.amplitudes();
  return StateVector::from_raw(std::move(v));
}

UnitaryOp tensor_op(const UnitaryOp& outer, const UnitaryOp& inner) {
  return UnitaryOp::kron(outer, inner);
}

namespace {

std::vector<double> cumulative(const StateVector& s) {
  std::vector<double> cdf(s.dim());
  double acc = 0.0;
  for (std::size_t k = 0; k < s.dim(); ++k) {
    acc += std::norm(s[k]);
    cdf[k] = acc;
  }
  return cdf;
}

std::size_t draw(const std::vector<double>& cdf, RandomSource& rng) {
  const double u = rng.uniform() * cdf.back();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  auto idx = static_cast<std::size_t>(it - cdf.begin());
  if (idx >= cdf.size()) idx = cdf.size() - 1;
  return idx;
}

}  // namespace

Histogram measure(const StateVector& s, std::uint64_t shots, RandomSource& rng) {
  if (shots == 0) fail(ErrorKind::InvalidArgument, "shots must be at least 1");
  const auto cdf = cumulative(s);
  Histogram h;
  for (std::uint64_t i = 0; i < shots; ++i) ++h[draw(cdf, rng)];
  return h;
}

std::size_t measure_once(const StateVector& s, RandomSource& rng) { return draw(cumulative(s), rng); }

namespace {

void check_split(const StateVector& s, RegisterSplit split, std::size_t value) {
  if (split.ancilla_dim * split.system_dim != s.dim()) {
    fail(ErrorKind::DimMismatch, "register split does not partition the state dimension");
  }
  if (value >= split.ancilla_dim) fail(ErrorKind::InvalidArgument, "ancilla value out of range");
}

}  // namespace

double branch_probability(const StateVector& s, RegisterSplit split, std::size_t value) {
  check_split(s, split, value);
  const auto n = static_cast<Eigen::Index>(split.system_dim);
  return s.amplitudes().segment(static_cast<Eigen::Index>(value) * n, n).squaredNorm();
}

PostSelection postselect(const StateVector& s, RegisterSplit split, std::size_t value) {
  const double p = branch_probability(s, split, value);
  if (p < kZeroNorm) {
    std::ostringstream msg;
    msg << "post-selected branch " << value << " has probability " << p;
    fail(ErrorKind::ZeroProbability, msg.str());
  }
  const auto n = static_cast<Eigen::Index>(split.system_dim);
  return {p, StateVector::from_raw(s.amplitudes().segment(static_cast<Eigen::Index>(value) * n, n))};
}

UnitaryOp reflect_about(const StateVector& v, CostLedger cost) {
  return UnitaryOp::reflection(v.amplitudes(), 1.0, cost);
}

UnitaryOp householder_prep(const StateVector& target, CostLedger cost) {
  const CVector& v = target.amplitudes();
  const double phase = std::abs(v[0]) > kZeroNorm ? std::arg(v[0]) : 0.0;
  const Complex rot = std::polar(1.0, phase);
  CVector w = -(v / rot);
  w[0] += 1.0;
  const double n = w.norm();
  if (n <= kZeroNorm) return UnitaryOp::reflection(CVector::Zero(v.size()), rot, cost);
  return UnitaryOp::reflection(w / n, rot, cost);
}

GoodSubspace GoodSubspace::range(std::size_t dim, std::size_t begin, std::size_t end) {
  if (begin > end || end > dim) fail(ErrorKind::InvalidArgument, "good range out of bounds");
  std::vector<char> mask(dim, 0);
  std::fill(mask.begin() + static_cast<std::ptrdiff_t>(begin),
            mask.begin() + static_cast<std::ptrdiff_t>(end), 1);
  return GoodSubspace(std::move(mask));
}

GoodSubspace GoodSubspace::indices(std::size_t dim, std::span<const std::size_t> members) {
  std::vector<char> mask(dim, 0);
  for (auto k : members) {
    if (k >= dim) fail(ErrorKind::InvalidArgument, "good index out of bounds");
    mask[k] = 1;
  }
  return GoodSubspace(std::move(mask));
}

double GoodSubspace::probability(const StateVector& s) const {
  if (s.dim() != dim()) fail(ErrorKind::DimMismatch, "good subspace and state dimensions differ");
  double p = 0.0;
  for (std::size_t k = 0; k < dim(); ++k) {
    if (mask_[k]) p += std::norm(s[k]);
  }
  return p;
}

UnitaryOp GoodSubspace::phase_flip(CostLedger cost) const {
  CVector d(static_cast<Eigen::Index>(dim()));
  for (std::size_t k = 0; k < dim(); ++k) d[static_cast<Eigen::Index>(k)] = mask_[k] ? -1.0 : 1.0;
  return UnitaryOp::diagonal(std::move(d), cost);
}

std::uint64_t amplification_rounds(double amplitude) {
  if (!(amplitude > 0.0 && amplitude <= 1.0 + 1e-12)) {
    fail(ErrorKind::InvalidArgument, "known amplitude must lie in (0, 1]");
  }
  const double theta = std::asin(std::min(amplitude, 1.0));
  return static_cast<std::uint64_t>(std::floor(std::numbers::pi / (4.0 * theta)));
}

Amplified amplitude_amplify(const UnitaryOp& a, const GoodSubspace& good, double known_amplitude,
                            const StateVector& initial, CostLedger& ledger) {
  const std::uint64_t rounds = amplification_rounds(known_amplitude);
  StateVector psi = apply(a, initial, ledger);
  const double p0 = good.probability(psi);
  if (std::abs(p0 - known_amplitude * known_amplitude) > 1e-6) {
    std::ostringstream msg;
    msg << "good-subspace probability " << p0 << " does not match known amplitude "
        << known_amplitude << " squared";
    fail(ErrorKind::AmplitudeMismatch, msg.str());
  }
  // A S_0 A^dag = I - 2|psi0><psi0|; each use charges A twice.
  CostLedger one_op;
  one_op.elementary_ops = 1;
  const UnitaryOp flip = good.phase_flip(one_op);
  const UnitaryOp about_start = reflect_about(psi, a.cost().times(2) + one_op);
  for (std::uint64_t r = 0; r < rounds; ++r) {
    psi = apply(flip, psi, ledger);
    psi = apply(about_start, psi, ledger);
  }
  return {psi, rounds, good.probability(psi)};
}

}  // namespace lculab
