#include "lculab/fracpow.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace lculab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double principal(double phase) {
  double p = std::remainder(phase, kTwoPi);  // [-pi, pi]
  if (p <= -kPi) p += kTwoPi;
  return p;
}

void check_t(double t) {
  if (!(t >= 0.0 && t <= 1.0)) fail(ErrorKind::InvalidArgument, "fractional power t must lie in [0, 1]");
}

UnitaryOp from_phases(const EigenDecomp& d, const RVector& phases, CostLedger cost) {
  CVector diag(phases.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) diag[k] = std::polar(1.0, phases[k]);
  return UnitaryOp::dense(d.vectors * diag.asDiagonal() * d.vectors.adjoint(), cost);
}

}  // namespace

CMatrix EigenDecomp::reconstruct() const {
  CVector diag(phases.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) diag[k] = std::polar(1.0, phases[k]);
  return vectors * diag.asDiagonal() * vectors.adjoint();
}

EigenDecomp eig_unitary(const UnitaryOp& u) {
  const CMatrix m = u.matrix();
  // The Schur form of a normal matrix is diagonal, and its Schur vectors are
  // orthonormal even inside degenerate eigenspaces.
  Eigen::ComplexSchur<CMatrix> schur(m);
  if (schur.info() != Eigen::Success) fail(ErrorKind::NumericalFailure, "Schur decomposition failed");
  const CMatrix& t = schur.matrixT();
  EigenDecomp out;
  out.vectors = schur.matrixU();
  out.phases.resize(t.rows());
  for (Eigen::Index k = 0; k < t.rows(); ++k) out.phases[k] = principal(std::arg(t(k, k)));

  const double recon = (out.reconstruct() - m).cwiseAbs().maxCoeff();
  const double ortho = unitarity_defect(out.vectors);
  if (!(recon <= kUnitaryTol) || !(ortho <= kUnitaryTol)) {
    std::ostringstream msg;
    msg << "eigendecomposition check failed: reconstruction " << recon << ", orthonormality " << ortho;
    fail(ErrorKind::NumericalFailure, msg.str());
  }
  return out;
}

HermitianOp principal_log(const UnitaryOp& u) {
  const EigenDecomp d = eig_unitary(u);
  for (Eigen::Index k = 0; k < d.phases.size(); ++k) {
    if (kPi - std::abs(d.phases[k]) < 1e-10) {
      fail(ErrorKind::BranchAmbiguity, "eigenphase on the branch cut at pi");
    }
  }
  CMatrix a = -(d.vectors * d.phases.cast<Complex>().asDiagonal() * d.vectors.adjoint());
  a = 0.5 * (a + a.adjoint()).eval();
  return HermitianOp::from_matrix(std::move(a));
}

RotationSpec::RotationSpec(StateVector e1, StateVector e2, double angle, CostLedger unit_cost)
    : e1_(std::move(e1)), e2_(std::move(e2)), angle_(angle), unit_cost_(unit_cost) {
  if (e1_.dim() != e2_.dim()) fail(ErrorKind::DimMismatch, "rotation plane vectors differ in dimension");
  if (std::abs(inner(e1_, e2_)) > kUnitaryTol) fail(ErrorKind::InvalidArgument, "rotation frame must be orthogonal");
}

HermitianOp RotationSpec::generator() const {
  // exp(angle (|e2><e1| - |e1><e2|)) = exp(-iA) with A = i angle (|e2><e1| - |e1><e2|).
  const CVector& u = e1_.amplitudes();
  const CVector& w = e2_.amplitudes();
  CMatrix a = Complex(0.0, angle_) * (w * u.adjoint() - u * w.adjoint());
  a = 0.5 * (a + a.adjoint()).eval();
  return HermitianOp::from_matrix(std::move(a));
}

UnitaryOp RotationSpec::rotation(double angle, CostLedger cost) const {
  return UnitaryOp::plane_rotation(e1_.amplitudes(), e2_.amplitudes(), angle, cost);
}

UnitaryOp RotationSpec::evolve(double t, CostLedger cost) const { return rotation(t * angle_, cost); }

UnitaryOp RotationSpec::power(std::uint64_t k) const {
  return rotation(std::fmod(static_cast<double>(k) * angle_, kTwoPi), unit_cost_.times(k));
}

RotationSpec rotation_generator(const StateVector& a, const StateVector& b, CostLedger unit_cost) {
  if (!a.is_real() || !b.is_real()) fail(ErrorKind::NonRealState, "rotation generator needs real states");
  const double c = inner(a, b).real();
  CVector perp = b.amplitudes() - c * a.amplitudes();
  const double s = perp.norm();
  if (!(s > 1e-10)) fail(ErrorKind::CollinearStates, "states are collinear; the rotation plane is undefined");
  perp /= s;
  // <a|b> = cos(2 theta), rotation angle 4 theta in (0, 2 pi).
  const double angle = 2.0 * std::atan2(s, c);
  return RotationSpec(a, StateVector::from_raw(std::move(perp)), angle, unit_cost);
}

HermitianOp rotation_generator_closed_form(const StateVector& a, const StateVector& b) {
  const double c = inner(a, b).real();
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  if (!(s > 1e-10)) fail(ErrorKind::CollinearStates, "states are collinear");
  const double four_theta = 2.0 * std::acos(c);
  const CVector& u = a.amplitudes();
  const CVector& w = b.amplitudes();
  CMatrix m = Complex(0.0, -four_theta / s) * (u * w.adjoint() - w * u.adjoint());
  m = 0.5 * (m + m.adjoint()).eval();
  return HermitianOp::from_matrix(std::move(m));
}

UnitaryOp frac_power_eig(const UnitaryOp& u, double t, double cost_epsilon) {
  check_t(t);
  if (!(cost_epsilon > 0.0)) fail(ErrorKind::InvalidArgument, "cost epsilon must be positive");
  const EigenDecomp d = eig_unitary(u);
  for (Eigen::Index k = 0; k < d.phases.size(); ++k) {
    if (t != 0.0 && t != 1.0 && kPi - std::abs(d.phases[k]) < 1e-10) {
      fail(ErrorKind::BranchAmbiguity, "eigenphase on the branch cut at pi");
    }
  }
  const auto factor = static_cast<std::uint64_t>(std::ceil(1.0 / cost_epsilon));
  return from_phases(d, d.phases * t, u.cost().times(factor));
}

double quantize_phase(double phase, unsigned bits) {
  const double steps = std::ldexp(1.0, static_cast<int>(bits));
  return kTwoPi * std::round(phase * steps / kTwoPi) / steps;
}

UnitaryOp frac_power_pe(const UnitaryOp& u, double t, unsigned bits) {
  if (!(t > 0.0 && t < 1.0)) fail(ErrorKind::InvalidArgument, "phase-estimation power needs 0 < t < 1");
  if (bits < 1 || bits > 20) fail(ErrorKind::InvalidArgument, "bits must lie in [1, 20]");
  const EigenDecomp d = eig_unitary(u);
  RVector phases(d.phases.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) phases[k] = quantize_phase(d.phases[k], bits) * t;
  return from_phases(d, phases, u.cost().times(std::uint64_t{1} << bits));
}

UnitaryOp frac_power_pe(const RotationSpec& spec, double t, unsigned bits) {
  if (!(t > 0.0 && t < 1.0)) fail(ErrorKind::InvalidArgument, "phase-estimation power needs 0 < t < 1");
  if (bits < 1 || bits > 20) fail(ErrorKind::InvalidArgument, "bits must lie in [1, 20]");
  const double quantized = quantize_phase(spec.angle(), bits);
  return spec.rotation(quantized * t, spec.unit_cost().times(std::uint64_t{1} << bits));
}

double circular_distance(double x, double y) { return std::abs(std::remainder(x - y, kTwoPi)); }

IterateResult frac_power_iterate(double angle, double t, double tol, std::uint64_t max_k) {
  if (!(t > 0.0 && t < 1.0)) fail(ErrorKind::InvalidArgument, "iterate power needs 0 < t < 1");
  if (!(tol > 0.0)) fail(ErrorKind::InvalidArgument, "tolerance must be positive");
  if (max_k == 0) fail(ErrorKind::InvalidArgument, "max_k must be at least 1");
  const double target = t * angle;
  IterateResult best{0, std::numeric_limits<double>::infinity()};
  for (std::uint64_t k = 1; k <= max_k; ++k) {
    const double d = circular_distance(std::fmod(static_cast<double>(k) * angle, kTwoPi), target);
    if (d < best.achieved_error) best = {k, d};
    if (d <= tol) return {k, d};
  }
  std::ostringstream msg;
  msg << "no power k <= " << max_k << " within " << tol << " rad; best k = " << best.k
      << " with error " << best.achieved_error;
  throw NoApproximationError(best.k, best.achieved_error, msg.str());
}

IterateResult frac_power_iterate(const RotationSpec& spec, double t, double tol, std::uint64_t max_k) {
  return frac_power_iterate(spec.angle(), t, tol, max_k);
}

double operator_distance(const UnitaryOp& u, const UnitaryOp& v) {
  if (u.dim() != v.dim()) fail(ErrorKind::DimMismatch, "operators differ in dimension");
  return spectral_norm(u.matrix() - v.matrix());
}

}  // namespace lculab
