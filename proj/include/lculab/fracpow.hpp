#pragma once

// Fractional powers U^t (0 <= t <= 1) of unitaries: analytic
// eigendecomposition, phase-estimation quantization, and integer iterates of
// a planar rotation.

#include <cstdint>

#include "lculab/qcore.hpp"

namespace lculab {

/// U = V diag(exp(i * phases)) V^dag with phases on (-pi, pi].
struct EigenDecomp {
  RVector phases;
  CMatrix vectors;

  CMatrix reconstruct() const;
};

EigenDecomp eig_unitary(const UnitaryOp& u);

/// Hermitian A = -V diag(phases) V^dag, so that U = exp(-iA). Throws
/// BranchAmbiguity if any eigenphase lies within 1e-10 of pi.
HermitianOp principal_log(const UnitaryOp& u);

/// A rotation in the real plane spanned by two states, together with its
/// Hermitian generator. `unit_cost` is the cost of one application of the
/// full rotation.
class RotationSpec {
 public:
  RotationSpec(StateVector e1, StateVector e2, double angle, CostLedger unit_cost);

  /// Orthonormal frame of the plane; the rotation turns e1 towards e2.
  const StateVector& e1() const { return e1_; }
  const StateVector& e2() const { return e2_; }
  /// In (0, 2pi).
  double angle() const { return angle_; }
  const CostLedger& unit_cost() const { return unit_cost_; }

  /// Dense generator A with exp(-iA) equal to the rotation.
  HermitianOp generator() const;
  /// Rotation by an arbitrary angle in this plane, identity elsewhere.
  UnitaryOp rotation(double angle, CostLedger cost = {}) const;
  /// exp(-i A t): rotation by t * angle().
  UnitaryOp evolve(double t, CostLedger cost = {}) const;
  /// R^k, charged k times the unit cost.
  UnitaryOp power(std::uint64_t k) const;

 private:
  StateVector e1_;
  StateVector e2_;
  double angle_;
  CostLedger unit_cost_;
};

/// Generator of (I - 2|b><b|)(I - 2|a><a|) for real a, b with
/// <a|b> = cos(2 theta): the rotation by 4 theta taking a to
/// -a + 2<a|b> b. Throws CollinearStates if sin(2 theta) <= 1e-10.
RotationSpec rotation_generator(const StateVector& a, const StateVector& b, CostLedger unit_cost = {});

/// The same generator in the closed form
/// -(4 theta / sin 2theta) i (|a><b| - |b><a|).
HermitianOp rotation_generator_closed_form(const StateVector& a, const StateVector& b);

/// V diag(exp(i phase_j t)) V^dag. The cost tag is U.cost() scaled by
/// ceil(1 / cost_epsilon).
UnitaryOp frac_power_eig(const UnitaryOp& u, double t, double cost_epsilon = 1e-2);

/// Rounds a phase to the nearest multiple of 2pi / 2^bits.
double quantize_phase(double phase, unsigned bits);

/// Ideal phase-estimation fractional power: every eigenphase is quantized to
/// `bits` before scaling by t. Cost is 2^bits uses of U.
UnitaryOp frac_power_pe(const UnitaryOp& u, double t, unsigned bits);

/// Phase-estimation route for a known rotation: the eigenphase pair
/// +-angle is quantized on the branch of the rotation's own generator, so the
/// result stays a real rotation in the plane.
UnitaryOp frac_power_pe(const RotationSpec& spec, double t, unsigned bits);

/// Distance on the circle, in [0, pi].
double circular_distance(double x, double y);

struct IterateResult {
  std::uint64_t k;
  double achieved_error;
};

/// Smallest k in [1, max_k] with d(k * angle, t * angle) <= tol; throws
/// NoApproximationError (carrying the best k) if none exists.
IterateResult frac_power_iterate(double angle, double t, double tol, std::uint64_t max_k);
IterateResult frac_power_iterate(const RotationSpec& spec, double t, double tol, std::uint64_t max_k);

/// Spectral-norm distance between two operators.
double operator_distance(const UnitaryOp& u, const UnitaryOp& v);

}  // namespace lculab
