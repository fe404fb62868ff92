#include <cmath>

#include "doctest.h"
#include "lculab/prep.hpp"
#include "oracles.hpp"

using namespace lculab;

namespace {

ClassicalVector cvec(std::vector<double> v) { return ClassicalVector::from(v); }

double plain_norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

}  // namespace

TEST_CASE("classical vector") {
  const ClassicalVector x = cvec({3, -1, 2, 0});
  CHECK(x.max_abs() == 3.0);
  CHECK(x.min_abs_nonzero() == 1.0);
  CHECK(x.kappa() == 3.0);
  CHECK(x.support() == std::vector<std::size_t>{0, 1, 2});
  CHECK(x.norm() == doctest::Approx(std::sqrt(14.0)));
  try {
    cvec({0, 0});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroVector);
  }
  CHECK_THROWS_AS(cvec({1, std::nan("")}), Error);
  CHECK_THROWS_AS(cvec({}), Error);
}

TEST_CASE("naive preparation") {
  const NaivePrep p = prep_naive(cvec({3, -1, 2}));
  CHECK(std::abs(p.state[0] - 3.0 / std::sqrt(14.0)) < 1e-15);
  CHECK(std::abs(p.state[1] + 1.0 / std::sqrt(14.0)) < 1e-15);
  CHECK((p.unitary.matrix().col(0) - p.state.amplitudes()).norm() < 1e-12);
  CHECK(p.ledger.elementary_ops == 9);
  const NaivePrep u = prep_naive(cvec({1, 1, 1, 1}));
  CHECK(fidelity(u.state, StateVector::uniform(4)) == doctest::Approx(1.0));
  const NaivePrep e = prep_naive(cvec({1, 0, 0}));
  CHECK(fidelity(e.state, StateVector::basis(3, 0)) == doctest::Approx(1.0));
}

TEST_CASE("uniform-ish preparation") {
  RandomSource rng(1);
  const PrepReport u = prep_uniformish(cvec({1, 1, 1, 1}), rng, false);
  CHECK(u.success_probability == doctest::Approx(1.0).epsilon(1e-12));
  const PrepReport r = prep_uniformish(cvec({2, 1}), rng, false);
  CHECK(r.success_probability == doctest::Approx(5.0 / 8.0).epsilon(1e-12));
  CHECK(r.fidelity >= 1.0 - 1e-9);

  // against a plain-vector simulation of the merged circuit
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.below(30);
    std::vector<double> x(n);
    for (auto& e : x) e = (rng.uniform() < 0.2) ? 0.0 : rng.normal();
    x[0] = 1.0;
    double amax = 0.0;
    std::size_t nz = 0;
    for (double e : x) {
      amax = std::max(amax, std::abs(e));
      if (e != 0.0) ++nz;
    }
    // ancilla-0 branch amplitudes are x_j / (sqrt(n') max)
    double p = 0.0;
    for (double e : x) p += (e / amax) * (e / amax) / double(nz);
    const PrepReport pr = prep_uniformish(cvec(x), rng, false);
    if (nz > 1) CHECK(pr.success_probability == doctest::Approx(p).epsilon(1e-9));
    CHECK(pr.fidelity >= 1.0 - 1e-9);
    const PrepReport amp = prep_uniformish(cvec(x), rng, true);
    CHECK(amp.fidelity >= 1.0 - 1e-9);
    CHECK(amp.amplification_rounds <= static_cast<std::uint64_t>(std::ceil(oracle::pi / 4 * cvec(x).kappa())));
  }

  // kappa = 1000 spike
  std::vector<double> spike(64, 1e-3);
  spike[7] = 1.0;
  const PrepReport sp = prep_uniformish(cvec(spike), rng, true);
  CHECK(sp.amplification_rounds <= static_cast<std::uint64_t>(std::ceil(oracle::pi / 4 * 1000)));
  CHECK(sp.fidelity >= 1.0 - 1e-9);

  // literal circuit: amplitude ||x|| / (n max)
  const PrepReport lit = prep_uniformish(cvec({2, 1}), rng, false, UniformishCircuit::literal);
  CHECK(lit.success_probability == doctest::Approx(5.0 / 16.0).epsilon(1e-12));
  CHECK(lit.fidelity >= 1.0 - 1e-9);

  const PrepReport single = prep_uniformish(cvec({0, -4, 0}), rng, false);
  CHECK(fidelity(single.output, StateVector::basis(3, 1)) == doctest::Approx(1.0));
}

TEST_CASE("bin decomposition") {
  const BinDecomposition d = decompose_bins(cvec({1, 3, 8}));
  CHECK(d.q == 3);
  CHECK(d.bins[0] == std::vector<double>{1, 0, 0});
  CHECK(d.bins[1] == std::vector<double>{0, 3, 0});
  CHECK(d.bins[2] == std::vector<double>{0, 0, 8});
  CHECK(decompose_bins(cvec({2, 2, -2})).q == 1);
  std::vector<double> k1000(10, 1.0);
  k1000[3] = 1000.0;
  CHECK(decompose_bins(cvec(k1000)).q == 10);
  // power-of-two kappa puts the max on the closed right edge
  const BinDecomposition edge = decompose_bins(cvec({1, 4}));
  CHECK(edge.q == 2);
  CHECK(edge.bins[1] == std::vector<double>{0, 4});

  RandomSource rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.below(200);
    std::vector<double> x(n);
    for (auto& e : x) e = (rng.uniform() < 0.5 ? -1.0 : 1.0) * std::exp2(20.0 * rng.uniform());
    const BinDecomposition b = decompose_bins(cvec(x));
    double lam = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      double sum = 0.0;
      int owners = 0;
      for (const auto& bin : b.bins) {
        if (bin[k] != 0.0) {
          sum += bin[k];
          ++owners;
        }
      }
      CHECK(sum == x[k]);
      CHECK(owners == 1);
    }
    for (std::size_t j = 0; j < b.q; ++j) {
      lam += b.lambdas[j];
      double lo = HUGE_VAL;
      double hi = 0.0;
      for (double e : b.bins[j]) {
        if (e != 0.0) {
          lo = std::min(lo, std::abs(e));
          hi = std::max(hi, std::abs(e));
        }
      }
      if (hi > 0.0) CHECK(hi / lo <= 2.0 + 1e-12);
    }
    CHECK(lam <= std::sqrt(double(b.q)) + 1e-12);
  }
}

TEST_CASE("bin-based preparation") {
  RandomSource rng(3);
  const PrepReport r = prep_thm1(cvec({1, 3, 8}), rng);
  // ||x||^2 / (sum of bin norms)^2
  const double expect = plain_norm2({1, 3, 8}) / (12.0 * 12.0);
  CHECK(expect == doctest::Approx(74.0 / 144.0));
  CHECK(r.success_probability == doctest::Approx(expect).epsilon(1e-12));
  CHECK(r.fidelity >= 1.0 - 1e-6);
  CHECK(r.q == 3);

  const PrepReport u = prep_thm1(cvec({1, -1, 1, 1}), rng);
  CHECK(u.q == 1);
  CHECK(u.attempts == 1);
  CHECK(u.fidelity >= 1.0 - 1e-9);

  std::vector<double> x(1024);
  for (auto& e : x) e = (rng.uniform() < 0.5 ? -1.0 : 1.0) * std::exp2(20.0 * rng.uniform());
  x[0] = 1.0;
  x[1] = std::exp2(20.0);
  const PrepReport big = prep_thm1(cvec(x), rng);
  CHECK(big.q == 20);
  CHECK(big.fidelity >= 0.999);
  CHECK(big.expected_attempts <= 20.0);
  CHECK(big.inner_expected_attempts <= 4.0);
}

TEST_CASE("sign shift") {
  const SignShift s = sign_shift(cvec({3, -1, 2}));
  CHECK(s.m == 3.0);
  CHECK(s.y == std::vector<double>{3, -3, 3});
  CHECK(s.z_hi == std::vector<double>{6, -4, 5});
  CHECK(s.z_lo == std::vector<double>{0, 0, 0});
  CHECK(s.bound_ratio() == doctest::Approx(104.0 / 14.0).epsilon(1e-14));
  CHECK(s.bound_ratio() <= 3 * 9 + 1);

  const SignShift z = sign_shift(cvec({0, 2, -1}));
  CHECK(z.y[0] == 2.0);
  CHECK(z.z_hi[0] - z.y[0] + z.z_lo[0] == 0.0);

  RandomSource rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(50);
    std::vector<double> x(n);
    for (auto& e : x) e = (rng.uniform() < 0.5 ? -1.0 : 1.0) * std::exp2(40.0 * rng.uniform() - 20.0);
    const SignShift t = sign_shift(cvec(x));
    for (std::size_t k = 0; k < n; ++k) {
      CHECK((t.z_hi[k] - t.y[k]) + t.z_lo[k] == x[k]);
      CHECK(std::abs(t.z_hi[k]) == t.m + std::abs(x[k]));
    }
  }
}

TEST_CASE("the sign-shift bound fails for kappa below two") {
  // Uniform magnitudes: kappa = 1, ||y||^2 = n M^2, ||z||^2 = 4 n M^2,
  // so the ratio is 5 while 3 kappa^2 + 1 = 4.
  const SignShift s = sign_shift(cvec({1, -1, 1, 1}));
  CHECK(s.bound_ratio() == doctest::Approx(5.0));
  CHECK(s.bound_ratio() > 3.0 * 1.0 + 1.0);
  RandomSource rng(5);
  const PrepReport r = prep_thm2(cvec({1, -1, 1, 1}), 0.01, RotationVariant::pe, rng);
  REQUIRE(r.bound_holds.has_value());
  CHECK_FALSE(*r.bound_holds);
  // 2 kappa^2 + 2 kappa + 1 bounds the ratio for every kappa
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> x(1 + rng.below(20));
    for (auto& e : x) e = (rng.uniform() < 0.5 ? -1.0 : 1.0) * (1.0 + 3.0 * rng.uniform());
    const ClassicalVector cx = cvec(x);
    const double k = cx.kappa();
    CHECK(sign_shift(cx).bound_ratio() <= 2 * k * k + 2 * k + 1 + 1e-9);
    if (k >= 2.0) CHECK(sign_shift(cx).bound_ratio() <= 3 * k * k + 1);
  }
}

TEST_CASE("sign-shift preparation") {
  RandomSource rng(6);
  const PrepReport r = prep_thm2(cvec({3, -1, 2}), 0.01, RotationVariant::pe, rng);
  CHECK(r.fidelity >= 0.99);
  REQUIRE(r.bound_ratio.has_value());
  CHECK(*r.bound_ratio == doctest::Approx(104.0 / 14.0));
  CHECK(*r.bound_holds);
  for (auto v : {RotationVariant::eig, RotationVariant::pe, RotationVariant::iterate}) {
    for (double eps : {0.1, 0.01}) {
      std::vector<double> x(64);
      for (auto& e : x) e = (rng.uniform() < 0.5 ? -1.0 : 1.0) * std::exp2(6.0 * rng.uniform());
      CHECK(prep_thm2(cvec(x), eps, v, rng).fidelity >= 1.0 - eps);
    }
  }
  // x parallel to y
  const PrepReport flat = prep_thm2(cvec({2, -2, 2}), 0.01, RotationVariant::pe, rng);
  CHECK(flat.fidelity == doctest::Approx(1.0));
  CHECK_THROWS_AS(prep_thm2(cvec({1, 2}), 0.0, RotationVariant::pe, rng), Error);
}

TEST_CASE("all preparation routes agree") {
  RandomSource rng(7);
  std::vector<double> x(32);
  for (auto& e : x) e = (rng.uniform() < 0.5 ? -1.0 : 1.0) * std::exp2(5.0 * rng.uniform());
  const ClassicalVector cx = cvec(x);
  const double eps = 0.01;
  std::vector<StateVector> outs;
  for (auto m : {PrepMethod::naive, PrepMethod::prop2, PrepMethod::prop2_literal, PrepMethod::thm1, PrepMethod::thm2}) {
    PrepBenchOptions opt;
    opt.epsilon = eps;
    outs.push_back(run_prep(cx, m, rng, opt).output);
  }
  for (std::size_t i = 0; i < outs.size(); ++i) {
    for (std::size_t j = i + 1; j < outs.size(); ++j) CHECK(fidelity(outs[i], outs[j]) >= 1.0 - 2 * eps);
  }
  CHECK(parse_prep_method("thm2") == PrepMethod::thm2);
  CHECK_THROWS_AS(parse_prep_method("thm3"), Error);
}

TEST_CASE("prep bench is reproducible across thread counts") {
  std::vector<ClassicalVector> corpus;
  RandomSource rng(8);
  for (int i = 0; i < 6; ++i) {
    std::vector<double> x(16);
    for (auto& e : x) e = rng.normal();
    corpus.push_back(cvec(x));
  }
  const std::vector<PrepMethod> methods{PrepMethod::prop2, PrepMethod::thm1, PrepMethod::thm2};
  PrepBenchOptions one;
  PrepBenchOptions two;
  two.threads = 2;
  const auto a = prep_bench(corpus, methods, 9, one);
  const auto b = prep_bench(corpus, methods, 9, two);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].report.attempts == b[i].report.attempts);
    CHECK(a[i].report.ledger == b[i].report.ledger);
    CHECK(a[i].report.fidelity == b[i].report.fidelity);
  }
}
