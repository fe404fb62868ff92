#pragma once

// Sample-based overlap and angle estimators.

#include <cstdint>

#include "lculab/qcore.hpp"

namespace lculab {

/// How estimator cost is charged to the ledger. `sampling` records the
/// Bernoulli draws actually taken (ceil(4/eps^2)); `paper` charges the
/// amplitude-estimation rate ceil(1/eps) instead. Draws are identical.
enum class CostModel { sampling, paper };

struct AngleEstimate {
  double value;       // radians, [0, pi]
  double half_width;  // radians
  std::uint64_t samples_used;
};

struct OverlapEstimate {
  double estimate;
  std::uint64_t samples;
};

/// Number of Bernoulli draws for precision eps: ceil(4 / eps^2).
std::uint64_t estimator_samples(double epsilon);

/// Exact swap-test acceptance probability (1 + |<a|b>|^2) / 2.
double swap_test_prob(const StateVector& a, const StateVector& b);

/// |<a|b>| from sampled swap-test outcomes. Each sample prepares both
/// states once.
OverlapEstimate overlap_magnitude(const StateVector& a, const StateVector& b, double epsilon,
                                  RandomSource& rng, CostLedger& ledger,
                                  CostModel model = CostModel::sampling);

/// Re<a|b> from an idealized test accepting with probability
/// (1 + Re<a|b>) / 2. Real-amplitude states only.
OverlapEstimate overlap_signed(const StateVector& a, const StateVector& b, double epsilon,
                               RandomSource& rng, CostLedger& ledger,
                               CostModel model = CostModel::sampling);

/// acos of the clamped signed overlap, with half width
/// eps / sqrt(1 - c^2 + eps). Throws DegenerateAngle when |c| > 1 - 1e-12.
AngleEstimate estimate_angle(const StateVector& a, const StateVector& b, double epsilon,
                             RandomSource& rng, CostLedger& ledger,
                             CostModel model = CostModel::sampling);

}  // namespace lculab
