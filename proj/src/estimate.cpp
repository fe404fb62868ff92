#include "lculab/estimate.hpp"

#include <algorithm>
#include <cmath>

namespace lculab {

namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) fail(ErrorKind::InvalidArgument, "epsilon must lie in (0, 1)");
}

std::uint64_t bernoulli_count(double p, std::uint64_t n, RandomSource& rng) {
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < n; ++i) hits += rng.uniform() < p ? 1 : 0;
  return hits;
}

void charge(CostLedger& ledger, std::uint64_t drawn, double epsilon, CostModel model) {
  const std::uint64_t charged =
      model == CostModel::sampling ? drawn : static_cast<std::uint64_t>(std::ceil(1.0 / epsilon));
  ledger.estimator_samples += charged;
  ledger.input_preps += 2 * charged;
}

}  // namespace

std::uint64_t estimator_samples(double epsilon) {
  check_epsilon(epsilon);
  return static_cast<std::uint64_t>(std::ceil(4.0 / (epsilon * epsilon)));
}

double swap_test_prob(const StateVector& a, const StateVector& b) {
  return 0.5 * (1.0 + fidelity(a, b));
}

OverlapEstimate overlap_magnitude(const StateVector& a, const StateVector& b, double epsilon,
                                  RandomSource& rng, CostLedger& ledger, CostModel model) {
  const std::uint64_t n = estimator_samples(epsilon);
  const double p = swap_test_prob(a, b);
  const double accept = static_cast<double>(bernoulli_count(p, n, rng)) / static_cast<double>(n);
  charge(ledger, n, epsilon, model);
  const double squared = std::clamp(2.0 * accept - 1.0, 0.0, 1.0);
  return {std::sqrt(squared), n};
}

OverlapEstimate overlap_signed(const StateVector& a, const StateVector& b, double epsilon,
                               RandomSource& rng, CostLedger& ledger, CostModel model) {
  if (!a.is_real() || !b.is_real()) {
    fail(ErrorKind::NonRealState, "signed overlap test needs real-amplitude states");
  }
  const std::uint64_t n = estimator_samples(epsilon);
  const double c = std::clamp(inner(a, b).real(), -1.0, 1.0);
  const double p = 0.5 * (1.0 + c);
  const double accept = static_cast<double>(bernoulli_count(p, n, rng)) / static_cast<double>(n);
  charge(ledger, n, epsilon, model);
  return {std::clamp(2.0 * accept - 1.0, -1.0, 1.0), n};
}

AngleEstimate estimate_angle(const StateVector& a, const StateVector& b, double epsilon,
                             RandomSource& rng, CostLedger& ledger, CostModel model) {
  const OverlapEstimate c = overlap_signed(a, b, epsilon, rng, ledger, model);
  if (std::abs(c.estimate) > 1.0 - 1e-12) {
    fail(ErrorKind::DegenerateAngle, "estimated overlap is +-1; the angle is 0 or pi");
  }
  const double value = std::acos(c.estimate);
  const double half_width = epsilon / std::sqrt(1.0 - c.estimate * c.estimate + epsilon);
  return {value, half_width, c.samples};
}

}  // namespace lculab
