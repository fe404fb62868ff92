#include <cmath>

#include "doctest.h"
#include "lculab/fracpow.hpp"
#include "oracles.hpp"

using namespace lculab;

namespace {

CMatrix random_unitary(Eigen::Index d, RandomSource& rng) {
  CMatrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  }
  Eigen::HouseholderQR<CMatrix> qr(g);
  return qr.householderQ();
}

StateVector random_real(std::size_t dim, RandomSource& rng) {
  std::vector<double> v(dim);
  for (auto& x : v) x = rng.normal();
  return StateVector::from_real(v);
}

CMatrix planar(double angle) {
  CMatrix r(2, 2);
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

StateVector search_b(std::size_t n) {
  std::vector<double> v(n, -1.0);
  v[0] = 1.0;
  return StateVector::from_real(v);
}

}  // namespace

TEST_CASE("eigendecomposition") {
  const EigenDecomp id = eig_unitary(UnitaryOp::identity(3));
  CHECK(id.phases.cwiseAbs().maxCoeff() < 1e-14);
  CVector d(2);
  d << 1.0, -1.0;
  const EigenDecomp z = eig_unitary(UnitaryOp::diagonal(d));
  std::vector<double> ph{z.phases[0], z.phases[1]};
  std::sort(ph.begin(), ph.end());
  CHECK(ph[0] == doctest::Approx(0.0));
  CHECK(ph[1] == doctest::Approx(oracle::pi));

  // R built from the N = 4 search states: phases +-4theta on the plane, 0 twice.
  const StateVector a = StateVector::uniform(4);
  const StateVector b = search_b(4);
  const double four_theta = 2.0 * std::acos(-0.5);
  const UnitaryOp r = UnitaryOp::product({reflect_about(a), reflect_about(b)});
  const EigenDecomp e = eig_unitary(r);
  int zeros = 0;
  int plus = 0;
  int minus = 0;
  for (Eigen::Index k = 0; k < 4; ++k) {
    const Complex w = std::polar(1.0, e.phases[k]);
    if (std::abs(w - 1.0) < 1e-9) ++zeros;
    if (std::abs(w - std::polar(1.0, four_theta)) < 1e-9) ++plus;
    if (std::abs(w - std::polar(1.0, -four_theta)) < 1e-9) ++minus;
  }
  CHECK(zeros == 2);
  CHECK(plus == 1);
  CHECK(minus == 1);
  CHECK((e.reconstruct() - r.matrix()).cwiseAbs().maxCoeff() < 1e-8);

  RandomSource rng(3);
  const UnitaryOp u = UnitaryOp::dense(random_unitary(8, rng));
  const EigenDecomp eu = eig_unitary(u);
  CHECK(unitarity_defect(eu.vectors) < 1e-8);
  CHECK(eu.phases.maxCoeff() <= oracle::pi);
  CHECK(eu.phases.minCoeff() > -oracle::pi);
}

TEST_CASE("principal logarithm round trip") {
  CHECK(principal_log(UnitaryOp::identity(3)).matrix().norm() < 1e-14);
  RandomSource rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    CMatrix g(6, 6);
    for (Eigen::Index i = 0; i < 6; ++i) {
      for (Eigen::Index j = 0; j < 6; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
    }
    CMatrix a0 = 0.5 * (g + g.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a0);
    // Squash the spectrum into (-pi, pi).
    const double scale = 2.5 / es.eigenvalues().cwiseAbs().maxCoeff();
    a0 *= scale;
    const UnitaryOp u = UnitaryOp::dense(oracle::expm_minus_i(a0, 1.0));
    CHECK((principal_log(u).matrix() - a0).cwiseAbs().maxCoeff() < 1e-8);
  }
  CVector d(2);
  d << 1.0, -1.0;
  try {
    principal_log(UnitaryOp::diagonal(d));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BranchAmbiguity);
  }
}

TEST_CASE("principal log of the search rotation") {
  // At N = 4 the rotation angle 4theta = 4pi/3 exceeds pi, so the principal
  // branch reports +-(4theta - 2pi); the exponentials agree.
  const StateVector a = StateVector::uniform(4);
  const StateVector b = search_b(4);
  const UnitaryOp r = UnitaryOp::product({reflect_about(a), reflect_about(b)});
  const HermitianOp lg = principal_log(r);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(lg.matrix());
  const RVector ev = es.eigenvalues();
  int nonzero = 0;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (std::abs(ev[k]) > 1e-9) {
      ++nonzero;
      CHECK(std::abs(std::abs(ev[k]) - 2.0 * oracle::pi / 3.0) < 1e-9);
    }
  }
  CHECK(nonzero == 2);
  CHECK((oracle::expm_minus_i(lg.matrix(), 1.0) - r.matrix()).norm() < 1e-8);
}

TEST_CASE("rotation generator") {
  RandomSource rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t dim = 2 + rng.below(10);
    const StateVector a = random_real(dim, rng);
    const StateVector b = random_real(dim, rng);
    const RotationSpec spec = rotation_generator(a, b);
    const CMatrix r = oracle::reflection(b.amplitudes()) * oracle::reflection(a.amplitudes());
    CHECK((oracle::expm_minus_i(spec.generator().matrix(), 1.0) - r).norm() < 1e-8);
    CHECK((spec.generator().matrix() - rotation_generator_closed_form(a, b).matrix()).norm() < 1e-9);
    const double c = inner(a, b).real();
    const StateVector ra = apply(spec.evolve(1.0), a);
    CHECK((ra.amplitudes() - (-a.amplitudes() + 2.0 * c * b.amplitudes())).norm() < 1e-9);
    // quarter-time: angle acos(c)/2 from a towards b
    const StateVector q = apply(spec.evolve(0.25), a);
    const CVector expect = oracle::planar_target(a.amplitudes(), b.amplitudes(), 0.5 * std::acos(c));
    CHECK((q.amplitudes() - expect).norm() < 1e-9);
    // four quarter steps make one unit step
    StateVector steps = a;
    for (int i = 0; i < 4; ++i) steps = apply(spec.evolve(0.25), steps);
    CHECK((steps.amplitudes() - ra.amplitudes()).norm() < 1e-9);
    // identity on the orthogonal complement
    CVector w = CVector::Zero(static_cast<Eigen::Index>(dim));
    for (Eigen::Index k = 0; k < w.size(); ++k) w[k] = rng.normal();
    w -= a.amplitudes().dot(w) * a.amplitudes();
    const CVector e2 = spec.e2().amplitudes();
    w -= e2.dot(w) * e2;
    if (w.norm() > 1e-6) {
      const StateVector ws = StateVector::from_raw(w);
      CHECK((apply(spec.evolve(0.37), ws).amplitudes() - ws.amplitudes()).norm() < 1e-9);
    }
  }
  // orthogonal pair: eigenvalues +-pi/2... of the full-turn generator the
  // angle is pi; a maps to b up to sign.
  const StateVector e0 = StateVector::basis(3, 0);
  const StateVector e1 = StateVector::basis(3, 1);
  const RotationSpec orth = rotation_generator(e0, e1);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(orth.generator().matrix());
  CHECK(es.eigenvalues().cwiseAbs().maxCoeff() == doctest::Approx(oracle::pi));
  CHECK(fidelity(apply(orth.evolve(0.5), e0), e1) == doctest::Approx(1.0));
  CHECK_THROWS_AS(rotation_generator(e0, e0), Error);
  CHECK_THROWS_AS(rotation_generator(e0, e0.negated()), Error);
}

TEST_CASE("eig fractional power") {
  RandomSource rng(21);
  const UnitaryOp u = UnitaryOp::dense(random_unitary(8, rng));
  CHECK((frac_power_eig(u, 1.0).matrix() - u.matrix()).norm() < 1e-9);
  CHECK((frac_power_eig(u, 0.0).matrix() - CMatrix::Identity(8, 8)).norm() < 1e-12);
  for (int m : {2, 3, 4, 8}) {
    const CMatrix root = frac_power_eig(u, 1.0 / m).matrix();
    CMatrix p = CMatrix::Identity(8, 8);
    for (int i = 0; i < m; ++i) p = root * p;
    CHECK(spectral_norm(p - u.matrix()) <= m * 1e-8);
  }
  const CMatrix t1 = frac_power_eig(u, 0.3).matrix();
  const CMatrix t2 = frac_power_eig(u, 0.5).matrix();
  CHECK(spectral_norm(t1 * t2 - frac_power_eig(u, 0.8).matrix()) < 1e-7);
  const UnitaryOp rot = UnitaryOp::dense(planar(oracle::pi / 2));
  CHECK((frac_power_eig(rot, 0.25).matrix() - planar(oracle::pi / 8)).norm() < 1e-12);
  CostLedger unit;
  unit.input_preps = 2;
  CHECK(frac_power_eig(u.with_cost(unit), 0.5, 0.01).cost().input_preps == 200);
}

TEST_CASE("phase-estimation fractional power") {
  // phases already on the grid: exact
  CVector d(4);
  for (Eigen::Index k = 0; k < 4; ++k) d[k] = std::polar(1.0, 2.0 * oracle::pi * double(k) / 16.0);
  const UnitaryOp grid = UnitaryOp::diagonal(d);
  CHECK(operator_distance(frac_power_pe(grid, 0.3, 4), frac_power_eig(grid, 0.3)) < 1e-12);

  const UnitaryOp rot = UnitaryOp::dense(planar(1.0));
  const double dist = operator_distance(frac_power_pe(rot, 0.25, 8), frac_power_eig(rot, 0.25));
  CHECK(dist <= 2.0 * oracle::pi * 0.25 / 256.0 + 1e-9);
  CHECK(frac_power_pe(rot.with_cost(CostLedger{0, 1, 0, 0}), 0.25, 8).cost().input_preps == 256);

  RandomSource rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const UnitaryOp u = UnitaryOp::dense(random_unitary(8, rng));
    const UnitaryOp exact = frac_power_eig(u, 0.25);
    double prev = 1e9;
    for (unsigned bits = 2; bits <= 14; ++bits) {
      const double err = operator_distance(frac_power_pe(u, 0.25, bits), exact);
      CHECK(err <= 2.0 * oracle::pi * 0.25 / std::ldexp(1.0, int(bits)) + 1e-9);
      CHECK(err <= prev + 1e-12);
      prev = err;
    }
  }
  CHECK_THROWS_AS(frac_power_pe(rot, 0.0, 4), Error);
  CHECK_THROWS_AS(frac_power_pe(rot, 0.5, 21), Error);
}

TEST_CASE("integer iterates match a brute-force scan") {
  for (double angle : {2.0 * oracle::pi / 5.0, oracle::pi / 2.0, 1.0, 2.9, 5.5}) {
    for (double t : {0.25, 1.0 / 3.0, 0.1}) {
      const oracle::Scan best = oracle::brute_force_iterate(angle, t, 100);
      try {
        const IterateResult r = frac_power_iterate(angle, t, 1e-12, 100);
        CHECK(r.achieved_error <= 1e-12);
      } catch (const NoApproximationError& e) {
        CHECK(e.best_k() == best.k);
        CHECK(e.best_error() == doctest::Approx(best.distance).epsilon(1e-12));
      }
      // with a loose tolerance the first acceptable k is returned
      const double tol = 0.3;
      if (oracle::brute_force_iterate(angle, t, 1000).distance > tol) {
        CHECK_THROWS_AS(frac_power_iterate(angle, t, tol, 1000), NoApproximationError);
        continue;
      }
      const IterateResult r = frac_power_iterate(angle, t, tol, 1000);
      CHECK(r.achieved_error <= tol);
      for (std::uint64_t k = 1; k < r.k; ++k) {
        CHECK(oracle::circ(std::fmod(double(k) * angle, 2.0 * oracle::pi), t * angle) > tol);
      }
    }
  }
  // 2 pi / 5 at t = 1/4: the orbit of k * angle has five points, none within
  // pi/10 * tiny of the target, so the scan reports the argmin.
  try {
    frac_power_iterate(2.0 * oracle::pi / 5.0, 0.25, 1e-6, 20);
    CHECK(false);
  } catch (const NoApproximationError& e) {
    const oracle::Scan best = oracle::brute_force_iterate(2.0 * oracle::pi / 5.0, 0.25, 20);
    CHECK(e.best_k() == best.k);
  }
}

TEST_CASE("iterate count on the search geometry grows like sqrt(N)") {
  for (std::size_t n : {64u, 256u, 1024u}) {
    const StateVector a = StateVector::uniform(n);
    const StateVector b = search_b(n);
    const RotationSpec spec = rotation_generator(a, b);
    const double tol = std::acos(std::sqrt(1.0 - 0.5 / std::sqrt(double(n))));
    const IterateResult r = frac_power_iterate(spec, 0.25, tol, 4 * static_cast<std::uint64_t>(std::sqrt(double(n))));
    // (4k - 1) / sqrt(N) is close to (2 - 1/2) pi
    const double lhs = (4.0 * double(r.k) - 1.0) / std::sqrt(double(n));
    CHECK(std::abs(lhs - 1.5 * oracle::pi) < 4.0 * tol + 4.0 / std::sqrt(double(n)));
  }
}

TEST_CASE("rotation-spec phase estimation stays on the generator branch") {
  const std::size_t n = 64;
  const RotationSpec spec = rotation_generator(StateVector::uniform(n), search_b(n));
  CHECK(spec.angle() > oracle::pi);
  const UnitaryOp q = frac_power_pe(spec, 0.25, 10);
  const CMatrix exact = spec.evolve(0.25).matrix();
  CHECK(spectral_norm(q.matrix() - exact) <= 2.0 * oracle::pi * 0.25 / 1024.0 + 1e-9);
}
