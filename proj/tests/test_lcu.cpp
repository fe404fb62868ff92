#include <cmath>

#include "doctest.h"
#include "lculab/lcu.hpp"
#include "oracles.hpp"

using namespace lculab;

namespace {

std::vector<PreparedState> prep_all(const std::vector<StateVector>& states) {
  std::vector<PreparedState> out;
  for (const auto& s : states) out.push_back(prepared(s));
  return out;
}

std::vector<oracle::Vec> raw(const std::vector<StateVector>& states) {
  std::vector<oracle::Vec> out;
  for (const auto& s : states) out.push_back(s.amplitudes());
  return out;
}

oracle::Vec plain_sum(const std::vector<StateVector>& states, const std::vector<double>& coeffs) {
  oracle::Vec y = oracle::Vec::Zero(static_cast<Eigen::Index>(states.front().dim()));
  for (std::size_t j = 0; j < states.size(); ++j) y += coeffs[j] * states[j].amplitudes();
  return y;
}

StateVector search_b(std::size_t n) {
  std::vector<double> v(n, -1.0);
  v[0] = 1.0;
  return StateVector::from_real(v);
}

}  // namespace

TEST_CASE("weighted angles") {
  const WeightedAngles w = weighted_angles(StateVector::basis(2, 0), StateVector::basis(2, 1), 1.0, std::sqrt(3.0));
  CHECK(w.theta == doctest::Approx(oracle::pi / 3).epsilon(1e-14));
  CHECK(w.phi == doctest::Approx(oracle::pi / 2).epsilon(1e-14));
  CHECK(w.t == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  const WeightedAngles eq = weighted_angles_from_overlap(0.3, 2.0, 2.0);
  CHECK(eq.t == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(weighted_angles_from_overlap(0.3, 1.0, 0.0).t == 0.0);
  CHECK(weighted_angles_from_overlap(0.3, 0.0, 1.0).t == doctest::Approx(0.5));
  CHECK_THROWS_AS(weighted_angles_from_overlap(1.0, 1.0, 1.0), Error);
  CHECK_THROWS_AS(weighted_angles_from_overlap(0.3, -1.0, 1.0), Error);
}

TEST_CASE("hadamard combine") {
  RandomSource rng(1);
  // orthogonal basis states: success 1/2, output (|0> + |1>)/sqrt 2
  const CombineReport r = combine2_hadamard(prepared(StateVector::basis(2, 0)), prepared(StateVector::basis(2, 1)),
                                            rng, false);
  CHECK(r.success_probability == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r.target_fidelity == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(r.output[0] - 1.0 / std::sqrt(2.0)) < 1e-14);

  // search states at N = 4: the sum is proportional to the marked item
  const CombineReport s = combine2_hadamard(prepared(StateVector::uniform(4)), prepared(search_b(4)), rng, false);
  CHECK(s.success_probability == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(fidelity(s.output, StateVector::basis(4, 0)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.attempts >= 1);

  // with amplification the known amplitude is driven to ~1
  const CombineReport amp = combine2_hadamard(prepared(StateVector::uniform(64)), prepared(search_b(64)), rng, true);
  CHECK(amp.amplification_rounds > 0);
  CHECK(amp.success_probability > 0.9);
  CHECK(amp.target_fidelity == doctest::Approx(1.0).epsilon(1e-10));

  CHECK_THROWS_AS(combine2_hadamard(prepared(StateVector::basis(2, 0)), prepared(StateVector::basis(2, 0).negated()),
                                    rng, false),
                  Error);
  CHECK_THROWS_AS(combine2_hadamard(prepared(StateVector::basis(2, 0)), prepared(StateVector::basis(3, 0)), rng, false),
                  Error);
}

TEST_CASE("rotation combine variants") {
  RandomSource rng(2);
  const auto states = random_real_states(2, 6, false, rng);
  const double alpha = 0.7;
  const double beta = 1.9;
  const StateVector target = StateVector::from_raw(plain_sum(states, {alpha, beta}));
  for (auto variant : {RotationVariant::eig, RotationVariant::pe, RotationVariant::iterate}) {
    for (double eps : {0.1, 0.01}) {
      const CombineReport r =
          combine2_rotation(prepared(states[0]), prepared(states[1]), alpha, beta, eps, variant, rng);
      CHECK(fidelity(r.output, target) >= 1.0 - eps);
      CHECK(r.success_probability == 1.0);
      REQUIRE(r.tree_trace.size() == 1);
    }
  }
  const CombineReport exact =
      combine2_rotation(prepared(states[0]), prepared(states[1]), alpha, beta, 0.01, RotationVariant::eig, rng);
  CHECK(exact.target_fidelity == doctest::Approx(1.0).epsilon(1e-10));
  // eig charges ceil(1/eps) rotations of cost 2(1 + 1) preps each, plus preparing a
  CHECK(exact.ledger.input_preps == 1 + 4 * 100);

  // negative weights are absorbed into the states
  const StateVector diff = StateVector::from_raw(plain_sum(states, {alpha, -beta}));
  const CombineReport neg =
      combine2_rotation(prepared(states[0]), prepared(states[1]), alpha, -beta, 0.01, RotationVariant::eig, rng);
  CHECK(fidelity(neg.output, diff) == doctest::Approx(1.0).epsilon(1e-10));

  // zero weight returns the other state untouched
  const CombineReport zero =
      combine2_rotation(prepared(states[0]), prepared(states[1]), 0.0, 1.0, 0.01, RotationVariant::pe, rng);
  CHECK(fidelity(zero.output, states[1]) == doctest::Approx(1.0));

  // estimated angles with a loose epsilon still land near the target
  RotationOptions est;
  est.angle_mode = AngleMode::estimated;
  const CombineReport e =
      combine2_rotation(prepared(states[0]), prepared(states[1]), alpha, beta, 0.05, RotationVariant::eig, rng, est);
  CHECK(e.ledger.estimator_samples == estimator_samples(0.05));
  CHECK(e.target_fidelity > 0.9);

  CVector cplx(2);
  cplx << Complex(0, 1), 1.0;
  CHECK_THROWS_AS(combine2_rotation(prepared(StateVector::from_raw(cplx)), prepared(StateVector::basis(2, 0)), 1, 1,
                                    0.1, RotationVariant::pe, rng),
                  Error);
  CHECK_THROWS_AS(combine2_rotation(prepared(states[0]), prepared(states[0]), 1, 1, 0.1, RotationVariant::pe, rng),
                  Error);
}

TEST_CASE("bits and tolerance from epsilon") {
  CHECK(bits_for_epsilon(0.01) == 5);   // pi / 0.1 = 31.4
  CHECK(bits_for_epsilon(0.1) == 4);    // pi / 0.316 = 9.9
  CHECK(bits_for_epsilon(0.99) == 2);
  CHECK(std::cos(tolerance_for_epsilon(0.01)) * std::cos(tolerance_for_epsilon(0.01)) == doctest::Approx(0.99));
}

TEST_CASE("uniform-index combine matches the dense circuit") {
  RandomSource rng(3);
  const auto basis = random_real_states(4, 4, true, rng);
  const std::vector<double> coeffs{1, 2, 3, 4};
  CHECK(v1_success_closed_form(basis, coeffs) == doctest::Approx(0.1171875).epsilon(1e-15));
  CHECK(oracle::v1_dense_success(raw(basis), coeffs) == doctest::Approx(0.1171875).epsilon(1e-12));
  const CombineReport r = combine_multi_v1(prep_all(basis), coeffs, rng, false);
  CHECK(r.success_probability == doctest::Approx(0.1171875).epsilon(1e-12));
  CHECK(r.target_fidelity == doctest::Approx(1.0).epsilon(1e-12));

  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = 2 + rng.below(4);
    const std::size_t dim = 2 + rng.below(6);
    const auto states = random_real_states(m, dim, false, rng);
    std::vector<double> c(m);
    for (auto& x : c) x = rng.normal();
    oracle::Vec cond;
    const double p = oracle::v1_dense_success(raw(states), c, &cond);
    const CombineReport rr = combine_multi_v1(prep_all(states), c, rng, false);
    CHECK(rr.success_probability == doctest::Approx(p).epsilon(1e-10));
    CHECK(std::abs(rr.output.amplitudes().dot(cond)) == doctest::Approx(1.0).epsilon(1e-10));
    const double y2 = plain_sum(states, c).squaredNorm();
    double amax = 0.0;
    for (double x : c) amax = std::max(amax, std::abs(x));
    CHECK(p == doctest::Approx(y2 / (double(m * m) * amax * amax)).epsilon(1e-10));
  }
}

TEST_CASE("weighted-index combine matches the dense circuit") {
  RandomSource rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = 2 + rng.below(5);
    const std::size_t dim = 2 + rng.below(6);
    const auto states = random_real_states(m, dim, false, rng);
    std::vector<double> c(m);
    for (auto& x : c) x = rng.normal();
    oracle::Vec cond;
    const double p = oracle::v2_dense_success(raw(states), c, &cond);
    const CombineReport r = combine_multi_v2(prep_all(states), c, rng, false);
    CHECK(r.success_probability == doctest::Approx(p).epsilon(1e-10));
    CHECK(std::abs(r.output.amplitudes().dot(cond)) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.success_probability >= combine_multi_v1(prep_all(states), c, rng, false).success_probability - 1e-12);
    // amplified version reaches the same state
    const CombineReport a = combine_multi_v2(prep_all(states), c, rng, true);
    CHECK(a.target_fidelity == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(a.success_probability >= r.success_probability - 1e-12);
  }
  // equal weights on orthonormal states: v1 and v2 agree at 1/m
  const auto basis = random_real_states(4, 8, true, rng);
  const std::vector<double> ones(4, 1.0);
  CHECK(v1_success_closed_form(basis, ones) == doctest::Approx(0.25));
  CHECK(v2_success_closed_form(basis, ones) == doctest::Approx(0.25));
}

TEST_CASE("attempts follow the success probability") {
  RandomSource rng(5);
  const auto basis = random_real_states(4, 4, true, rng);
  const std::vector<double> c{1, 2, 3, 4};
  double total = 0.0;
  const int runs = 2000;
  for (int i = 0; i < runs; ++i) total += double(combine_multi_v1(prep_all(basis), c, rng, false).attempts);
  CHECK(total / runs == doctest::Approx(1.0 / 0.1171875).epsilon(0.08));
  const CombineReport one = combine_multi_v1(prep_all(basis), c, rng, false);
  CHECK(one.ledger.input_preps == 4 * one.attempts);
}

TEST_CASE("recursive combine") {
  RandomSource rng(6);
  const auto states = random_real_states(5, 8, false, rng);
  const std::vector<double> c{0.5, -1.0, 2.0, 0.25, 1.5};
  const StateVector target = StateVector::from_raw(plain_sum(states, c));
  const CombineReport r = combine_recursive(prep_all(states), c, 0.01 / 8, RotationVariant::pe, rng);
  CHECK(fidelity(r.output, target) >= 1.0 - 0.01);
  CHECK(r.success_probability == 1.0);
  // 8 leaves (3 padding): 4 + 2 + 1 nodes
  CHECK(r.tree_trace.size() == 7);
  const CombineReport e = combine_recursive(prep_all(states), c, 0.001, RotationVariant::eig, rng);
  CHECK(e.target_fidelity == doctest::Approx(1.0).epsilon(1e-9));

  const std::vector<StateVector> twins{states[0], states[0], states[1], states[2]};
  CHECK_THROWS_AS(combine_recursive(prep_all(twins), std::vector<double>{1, -1, 1, 1}, 0.01, RotationVariant::pe, rng),
                  Error);
  try {
    combine_recursive(prep_all(twins), std::vector<double>{1, -1, 1, 1}, 0.01, RotationVariant::pe, rng);
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::ZeroSum);
    CHECK(std::string(err.what()).find("level 0, index 0") != std::string::npos);
  }
}

TEST_CASE("combine dispatch") {
  RandomSource rng(7);
  const auto states = random_real_states(2, 4, false, rng);
  CombineRequest req{prep_all(states), {1.0, 1.0}, CombineMethod::hadamard};
  CHECK(combine(req, rng).target_fidelity == doctest::Approx(1.0));
  req.coeffs = {1.0, 2.0};
  CHECK_THROWS_AS(combine(req, rng), Error);
  req.method = CombineMethod::rotation_pe;
  CHECK(combine(req, rng).target_fidelity >= 0.99);
  req.method = CombineMethod::recursive;
  CHECK(combine(req, rng).target_fidelity >= 0.99);
  CHECK(parse_combine_method("multi-v2") == CombineMethod::multi_v2);
  CHECK_THROWS_AS(parse_combine_method("bogus"), Error);
  req.states.pop_back();
  CHECK_THROWS_AS(combine(req, rng), Error);
}

TEST_CASE("table bench is reproducible across thread counts") {
  std::vector<Table1Cell> grid;
  for (std::size_t m : {2u, 4u}) {
    for (bool orth : {true, false}) grid.push_back({m, 8, "ramp", std::vector<double>(m, 1.0), orth});
  }
  const auto one = table1_bench(grid, 11, 0.01, 1);
  const auto two = table1_bench(grid, 11, 0.01, 2);
  REQUIRE(one.size() == two.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].method == two[i].method);
    CHECK(one[i].attempts == two[i].attempts);
    CHECK(one[i].ledger == two[i].ledger);
    CHECK(one[i].fidelity == two[i].fidelity);
  }
}

TEST_CASE("rotation combine keeps the sign of the target near theta = pi/2") {
  // Near theta = pi/2 the reverse rotation lands close to -target with nearly
  // the same fidelity; the output must still carry the target's sign.
  RandomSource rng(8);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto st = random_real_states(2, 8, false, rng);
    const double c = inner(st[0], st[1]).real();
    const double s = std::sqrt(1.0 - c * c);
    const double theta = oracle::pi / 2 + 0.1 * (rng.uniform() - 0.5);
    // beta s / (alpha + beta c) = tan theta with alpha = 1
    const double beta = std::sin(theta) / (s * std::cos(theta) - c * std::sin(theta));
    if (!(beta > 0.0)) continue;
    const oracle::Vec target = (st[0].amplitudes() + beta * st[1].amplitudes()).normalized();
    for (auto variant : {RotationVariant::pe, RotationVariant::iterate}) {
      try {
        const CombineReport r = combine2_rotation(prepared(st[0]), prepared(st[1]), 1.0, beta, 0.01, variant, rng);
        CHECK(target.dot(r.output.amplitudes()).real() > 0.9);
        ++checked;
      } catch (const NoApproximationError&) {
      }
    }
  }
  CHECK(checked > 100);
}
