#include "lculab/lcu.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

namespace lculab {

namespace {

constexpr double kPi = std::numbers::pi;

CostLedger elementary(std::uint64_t n = 1) {
  CostLedger c;
  c.elementary_ops = n;
  return c;
}

void check_common_dim(std::span<const PreparedState> states) {
  for (const auto& s : states) {
    if (s.state.dim() != states.front().state.dim()) {
      fail(ErrorKind::DimMismatch, "all states must share one dimension");
    }
  }
}

struct Absorbed {
  std::vector<PreparedState> states;
  std::vector<double> coeffs;
};

/// Moves negative signs from the weights into the states.
Absorbed absorb_signs(std::span<const PreparedState> states, std::span<const double> coeffs) {
  if (states.size() != coeffs.size()) fail(ErrorKind::InvalidArgument, "states and coefficients differ in count");
  if (states.size() < 2) fail(ErrorKind::InvalidArgument, "need at least two states");
  check_common_dim(states);
  Absorbed out;
  for (std::size_t j = 0; j < states.size(); ++j) {
    if (!std::isfinite(coeffs[j])) fail(ErrorKind::InvalidArgument, "coefficients must be finite");
    if (coeffs[j] < 0.0) {
      out.states.push_back({states[j].state.negated(), states[j].cost});
      out.coeffs.push_back(-coeffs[j]);
    } else {
      out.states.push_back(states[j]);
      out.coeffs.push_back(coeffs[j]);
    }
  }
  return out;
}

std::vector<StateVector> bare(std::span<const PreparedState> states) {
  std::vector<StateVector> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s.state);
  return out;
}

std::uint64_t sample_attempts(double p, RandomSource& rng) {
  for (std::uint64_t attempt = 1; attempt <= kMaxAttempts; ++attempt) {
    if (rng.uniform() < p) return attempt;
  }
  std::ostringstream msg;
  msg << "post-selection failed " << kMaxAttempts << " times (success probability " << p << ")";
  fail(ErrorKind::RetryLimit, msg.str());
}

UnitaryOp hadamard2() {
  const double h = 1.0 / std::sqrt(2.0);
  CMatrix m(2, 2);
  m << h, h, h, -h;
  return UnitaryOp::dense(std::move(m), elementary());
}

UnitaryOp real_rotation2(double c, double s) {
  CMatrix m(2, 2);
  m << c, -s, s, c;
  return UnitaryOp::dense(std::move(m));
}

}  // namespace

CombineReport run_postselective(const UnitaryOp& a, std::size_t system_dim, double closed_form_p,
                                const StateVector& target, RandomSource& rng, bool use_amplification) {
  const std::size_t total = a.dim();
  const StateVector init = StateVector::basis(total, 0);
  const RegisterSplit split{total / system_dim, system_dim};

  CostLedger per_attempt;
  StateVector final_state = init;
  std::uint64_t rounds = 0;
  if (use_amplification) {
    const GoodSubspace good = GoodSubspace::range(total, 0, system_dim);
    Amplified amp = amplitude_amplify(a, good, std::sqrt(closed_form_p), init, per_attempt);
    rounds = amp.rounds;
    final_state = std::move(amp.state);
  } else {
    final_state = apply(a, init, per_attempt);
  }
  PostSelection ps = postselect(final_state, split, 0);
  CombineReport report{ps.state, fidelity(ps.state, target)};
  report.success_probability = ps.probability;
  report.amplification_rounds = rounds;
  report.attempts = sample_attempts(ps.probability, rng);
  report.ledger = per_attempt.times(report.attempts);
  return report;
}

std::string_view to_string(CombineMethod m) {
  switch (m) {
    case CombineMethod::hadamard: return "hadamard";
    case CombineMethod::rotation_eig: return "rotation-eig";
    case CombineMethod::rotation_pe: return "rotation-pe";
    case CombineMethod::rotation_iterate: return "rotation-iterate";
    case CombineMethod::multi_v1: return "multi-v1";
    case CombineMethod::multi_v2: return "multi-v2";
    case CombineMethod::recursive: return "recursive";
  }
  return "unknown";
}

std::string_view to_string(RotationVariant v) {
  switch (v) {
    case RotationVariant::eig: return "eig";
    case RotationVariant::pe: return "pe";
    case RotationVariant::iterate: return "iterate";
  }
  return "unknown";
}

CombineMethod parse_combine_method(std::string_view name) {
  for (auto m : {CombineMethod::hadamard, CombineMethod::rotation_eig, CombineMethod::rotation_pe,
                 CombineMethod::rotation_iterate, CombineMethod::multi_v1, CombineMethod::multi_v2,
                 CombineMethod::recursive}) {
    if (to_string(m) == name) return m;
  }
  fail(ErrorKind::ConfigError, "unknown combine method '" + std::string(name) + "'");
}

RotationVariant parse_rotation_variant(std::string_view name) {
  for (auto v : {RotationVariant::eig, RotationVariant::pe, RotationVariant::iterate}) {
    if (to_string(v) == name) return v;
  }
  fail(ErrorKind::ConfigError, "unknown rotation variant '" + std::string(name) + "'");
}

StateVector exact_combination(std::span<const StateVector> states, std::span<const double> coeffs) {
  if (states.empty() || states.size() != coeffs.size()) {
    fail(ErrorKind::InvalidArgument, "states and coefficients differ in count");
  }
  CVector sum = CVector::Zero(static_cast<Eigen::Index>(states.front().dim()));
  for (std::size_t j = 0; j < states.size(); ++j) {
    if (states[j].dim() != states.front().dim()) fail(ErrorKind::DimMismatch, "states differ in dimension");
    sum += coeffs[j] * states[j].amplitudes();
  }
  if (sum.norm() < 1e-12) fail(ErrorKind::ZeroSum, "the linear combination vanishes");
  return StateVector::from_raw(std::move(sum));
}

WeightedAngles weighted_angles_from_overlap(double overlap, double alpha, double beta) {
  if (alpha < 0.0 || beta < 0.0) fail(ErrorKind::InvalidArgument, "weights must be non-negative");
  if (alpha == 0.0 && beta == 0.0) fail(ErrorKind::ZeroSum, "both weights are zero");
  const double c = std::clamp(overlap, -1.0, 1.0);
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  if (!(s > 1e-10)) fail(ErrorKind::CollinearStates, "states are collinear");
  const double norm = std::sqrt(std::max(0.0, alpha * alpha + beta * beta + 2.0 * alpha * beta * c));
  if (norm < 1e-12) fail(ErrorKind::ZeroSum, "the weighted sum vanishes");
  WeightedAngles w{};
  w.phi = std::atan2(s, c);
  // Target components along a and along the unit vector (b - c a) / s.
  w.theta = std::atan2(beta * s, alpha + beta * c);
  w.t = w.theta / (2.0 * w.phi);
  return w;
}

WeightedAngles weighted_angles(const StateVector& a, const StateVector& b, double alpha, double beta) {
  if (!a.is_real() || !b.is_real()) fail(ErrorKind::NonRealState, "weighted angles need real states");
  return weighted_angles_from_overlap(inner(a, b).real(), alpha, beta);
}

unsigned bits_for_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) fail(ErrorKind::InvalidArgument, "epsilon must lie in (0, 1)");
  const double bits = std::ceil(std::log2(kPi / std::sqrt(epsilon)));
  return static_cast<unsigned>(std::clamp(bits, 1.0, 20.0));
}

double tolerance_for_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) fail(ErrorKind::InvalidArgument, "epsilon must lie in (0, 1)");
  return std::acos(std::sqrt(1.0 - epsilon));
}

CombineReport combine2_hadamard(const PreparedState& a, const PreparedState& b, RandomSource& rng,
                                bool use_amplification) {
  if (a.state.dim() != b.state.dim()) fail(ErrorKind::DimMismatch, "states differ in dimension");
  const CVector sum = a.state.amplitudes() + b.state.amplitudes();
  const double norm = sum.norm();
  if (norm < 1e-12) fail(ErrorKind::ZeroSum, "a + b vanishes");
  const StateVector target = StateVector::from_raw(sum);
  const std::size_t n = a.state.dim();

  const UnitaryOp h = UnitaryOp::kron(hadamard2(), UnitaryOp::identity(n));
  const UnitaryOp select = UnitaryOp::block_diagonal(
      {householder_prep(a.state, a.cost), householder_prep(b.state, b.cost)});
  const UnitaryOp circuit = UnitaryOp::product({h, select, h});
  return run_postselective(circuit, n, norm * norm / 4.0, target, rng, use_amplification);
}

CombineReport combine2_rotation(const PreparedState& a_in, const PreparedState& b_in, double alpha, double beta,
                                double epsilon, RotationVariant variant, RandomSource& rng,
                                const RotationOptions& options) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) fail(ErrorKind::InvalidArgument, "epsilon must lie in (0, 1)");
  const std::array<PreparedState, 2> pair{a_in, b_in};
  const std::array<double, 2> weights{alpha, beta};
  Absorbed abs = absorb_signs(pair, weights);
  const PreparedState& a = abs.states[0];
  const PreparedState& b = abs.states[1];
  alpha = abs.coeffs[0];
  beta = abs.coeffs[1];
  if (!a.state.is_real() || !b.state.is_real()) fail(ErrorKind::NonRealState, "rotation combine needs real states");

  const StateVector target = exact_combination(bare(abs.states), abs.coeffs);
  if (beta == 0.0 || alpha == 0.0) {
    const PreparedState& only = beta == 0.0 ? a : b;
    CombineReport report{only.state, fidelity(only.state, target)};
    report.ledger = only.cost;
    return report;
  }

  CombineReport report{a.state, 0.0};
  double overlap = inner(a.state, b.state).real();
  if (options.angle_mode == AngleMode::estimated) {
    overlap = overlap_signed(a.state, b.state, epsilon, rng, report.ledger, options.cost_model).estimate;
  }
  const WeightedAngles ang = weighted_angles_from_overlap(overlap, alpha, beta);
  const RotationSpec spec = rotation_generator(a.state, b.state, (a.cost + b.cost).times(2));
  const double believed_angle = 2.0 * ang.phi;

  UnitaryOp u = UnitaryOp::identity(a.state.dim());
  switch (variant) {
    case RotationVariant::eig: {
      const auto factor = static_cast<std::uint64_t>(std::ceil(1.0 / epsilon));
      u = spec.rotation(ang.t * believed_angle, spec.unit_cost().times(factor));
      break;
    }
    case RotationVariant::pe: {
      report.bits = options.bits.value_or(bits_for_epsilon(epsilon));
      u = frac_power_pe(spec, ang.t, report.bits);
      break;
    }
    case RotationVariant::iterate: {
      const double tol = tolerance_for_epsilon(epsilon);
      const std::uint64_t max_k = options.max_k.value_or(
          std::min<std::uint64_t>(kMaxAttempts, static_cast<std::uint64_t>(std::ceil(16.0 * kPi / tol))));
      const IterateResult it = frac_power_iterate(believed_angle, ang.t, tol, max_k);
      report.iterate_k = it.k;
      u = spec.power(it.k);
      break;
    }
  }

  const StateVector forward = apply(u, a.state);
  const StateVector backward = apply(u.adjoint(), a.state);
  // Signed overlaps, not fidelities: near theta = pi/2 the wrong direction
  // lands on -target, which a parent node would then add with the wrong sign.
  const bool reversed = inner(target, backward).real() > inner(target, forward).real();
  report.output = reversed ? backward : forward;
  report.target_fidelity = fidelity(report.output, target);
  report.ledger += a.cost;
  report.ledger += u.cost();

  TraceNode node;
  node.alpha_left = alpha;
  node.alpha_right = beta;
  node.phi = ang.phi;
  node.theta = ang.theta;
  node.t = ang.t;
  node.combined_alpha = std::sqrt(std::max(0.0, alpha * alpha + beta * beta + 2.0 * alpha * beta * overlap));
  node.reversed = reversed;
  report.tree_trace.push_back(node);
  return report;
}

CombineReport combine_multi_v1(std::span<const PreparedState> states_in, std::span<const double> coeffs_in,
                               RandomSource& rng, bool use_amplification) {
  const Absorbed abs = absorb_signs(states_in, coeffs_in);
  const std::size_t m = abs.states.size();
  const std::size_t n = abs.states.front().state.dim();
  const double max_alpha = *std::max_element(abs.coeffs.begin(), abs.coeffs.end());
  const StateVector target = exact_combination(bare(abs.states), abs.coeffs);

  const UnitaryOp spread = householder_prep(StateVector::uniform(m), elementary());
  std::vector<UnitaryOp> preps;
  std::vector<UnitaryOp> rotations;
  CostLedger prep_cost;
  for (std::size_t j = 0; j < m; ++j) {
    const PreparedState& s = abs.states[j];
    preps.push_back(UnitaryOp::kron(UnitaryOp::identity(2), householder_prep(s.state)));
    prep_cost += s.cost;
    const double c = abs.coeffs[j] / max_alpha;
    rotations.push_back(
        UnitaryOp::kron(real_rotation2(c, std::sqrt(std::max(0.0, 1.0 - c * c))), UnitaryOp::identity(n)));
  }
  const UnitaryOp circuit = UnitaryOp::product({
      UnitaryOp::kron(spread, UnitaryOp::identity(2 * n)),
      UnitaryOp::block_diagonal(std::move(preps), prep_cost),
      UnitaryOp::block_diagonal(std::move(rotations), elementary()),
      UnitaryOp::kron(spread.adjoint(), UnitaryOp::identity(2 * n)),
  });
  return run_postselective(circuit, n, v1_success_closed_form(bare(abs.states), abs.coeffs), target, rng,
                           use_amplification);
}

CombineReport combine_multi_v2(std::span<const PreparedState> states_in, std::span<const double> coeffs_in,
                               RandomSource& rng, bool use_amplification) {
  const Absorbed abs = absorb_signs(states_in, coeffs_in);
  const std::size_t m = abs.states.size();
  const std::size_t n = abs.states.front().state.dim();
  const StateVector target = exact_combination(bare(abs.states), abs.coeffs);

  CVector loading(static_cast<Eigen::Index>(m));
  for (std::size_t j = 0; j < m; ++j) loading[static_cast<Eigen::Index>(j)] = std::sqrt(abs.coeffs[j]);
  const UnitaryOp s_op = householder_prep(StateVector::from_raw(std::move(loading)), elementary());

  std::vector<UnitaryOp> preps;
  CostLedger prep_cost;
  for (const auto& s : abs.states) {
    preps.push_back(householder_prep(s.state));
    prep_cost += s.cost;
  }
  const UnitaryOp circuit = UnitaryOp::product({
      UnitaryOp::kron(s_op, UnitaryOp::identity(n)),
      UnitaryOp::block_diagonal(std::move(preps), prep_cost),
      UnitaryOp::kron(s_op.adjoint(), UnitaryOp::identity(n)),
  });
  return run_postselective(circuit, n, v2_success_closed_form(bare(abs.states), abs.coeffs), target, rng,
                           use_amplification);
}

CombineReport combine_recursive(std::span<const PreparedState> states_in, std::span<const double> coeffs_in,
                                double epsilon0, RotationVariant variant, RandomSource& rng,
                                const RotationOptions& options) {
  if (!(epsilon0 > 0.0 && epsilon0 < 0.5)) fail(ErrorKind::InvalidArgument, "epsilon0 must lie in (0, 1/2)");
  const Absorbed abs = absorb_signs(states_in, coeffs_in);
  const StateVector target = exact_combination(bare(abs.states), abs.coeffs);

  struct Node {
    PreparedState ps;
    double alpha;
  };
  std::vector<Node> level_nodes;
  for (std::size_t j = 0; j < abs.states.size(); ++j) level_nodes.push_back({abs.states[j], abs.coeffs[j]});
  std::size_t m = 1;
  while (m < level_nodes.size()) m *= 2;
  while (level_nodes.size() < m) level_nodes.push_back({abs.states.front(), 0.0});

  std::vector<TraceNode> trace;
  std::uint64_t bits = 0;
  for (std::size_t level = 0; level_nodes.size() > 1; ++level) {
    std::vector<Node> next;
    for (std::size_t i = 0; i < level_nodes.size() / 2; ++i) {
      const Node& left = level_nodes[2 * i];
      const Node& right = level_nodes[2 * i + 1];
      TraceNode tn;
      tn.level = level;
      tn.index = i;
      tn.alpha_left = left.alpha;
      tn.alpha_right = right.alpha;
      if (right.alpha == 0.0 || left.alpha == 0.0) {
        const Node& kept = right.alpha == 0.0 ? left : right;
        tn.passthrough = true;
        tn.combined_alpha = kept.alpha;
        next.push_back(kept);
        trace.push_back(tn);
        continue;
      }
      const double c = inner(left.ps.state, right.ps.state).real();
      if (std::abs(c) > 1.0 - 1e-12) {
        // Collinear children: the pair collapses onto the left state.
        const double merged = left.alpha + (c > 0 ? right.alpha : -right.alpha);
        if (std::abs(merged) < 1e-12) {
          std::ostringstream msg;
          msg << "tree node (level " << level << ", index " << i << ") cancels to zero";
          fail(ErrorKind::ZeroSum, msg.str());
        }
        PreparedState ps = merged > 0 ? left.ps : PreparedState{left.ps.state.negated(), left.ps.cost};
        tn.passthrough = true;
        tn.combined_alpha = std::abs(merged);
        next.push_back({std::move(ps), std::abs(merged)});
        trace.push_back(tn);
        continue;
      }
      CombineReport r;
      try {
        r = combine2_rotation(left.ps, right.ps, left.alpha, right.alpha, epsilon0, variant, rng, options);
      } catch (const Error& e) {
        std::ostringstream msg;
        msg << "tree node (level " << level << ", index " << i << "): " << e.what();
        throw Error(e.kind(), msg.str());
      }
      const TraceNode& inner_node = r.tree_trace.front();
      tn.phi = inner_node.phi;
      tn.theta = inner_node.theta;
      tn.t = inner_node.t;
      tn.reversed = inner_node.reversed;
      tn.combined_alpha = inner_node.combined_alpha;
      bits = std::max<std::uint64_t>(bits, r.bits);
      if (tn.combined_alpha < 1e-12) {
        std::ostringstream msg;
        msg << "tree node (level " << level << ", index " << i << ") cancels to zero";
        fail(ErrorKind::ZeroSum, msg.str());
      }
      trace.push_back(tn);
      next.push_back({{r.output, r.ledger}, tn.combined_alpha});
    }
    level_nodes = std::move(next);
  }

  const Node& root = level_nodes.front();
  CombineReport report{root.ps.state, fidelity(root.ps.state, target)};
  report.ledger = root.ps.cost;
  report.tree_trace = std::move(trace);
  report.bits = static_cast<unsigned>(bits);
  return report;
}

CombineReport combine(const CombineRequest& request, RandomSource& rng) {
  const auto& states = request.states;
  const auto& coeffs = request.coeffs;
  if (states.size() < 2 || states.size() != coeffs.size()) {
    fail(ErrorKind::InvalidArgument, "a combine request needs m >= 2 states with matching coefficients");
  }
  const auto require_pair = [&] {
    if (states.size() != 2) fail(ErrorKind::InvalidArgument, "two-state method needs exactly two states");
  };
  switch (request.method) {
    case CombineMethod::hadamard: {
      require_pair();
      if (coeffs[0] == 0.0 || std::abs(coeffs[0]) != std::abs(coeffs[1])) {
        fail(ErrorKind::InvalidArgument, "the Hadamard combine needs weights of equal magnitude");
      }
      const PreparedState a = coeffs[0] < 0 ? PreparedState{states[0].state.negated(), states[0].cost} : states[0];
      const PreparedState b = coeffs[1] < 0 ? PreparedState{states[1].state.negated(), states[1].cost} : states[1];
      return combine2_hadamard(a, b, rng, request.use_amplification);
    }
    case CombineMethod::rotation_eig:
      require_pair();
      return combine2_rotation(states[0], states[1], coeffs[0], coeffs[1], request.epsilon, RotationVariant::eig,
                               rng, request.rotation);
    case CombineMethod::rotation_pe:
      require_pair();
      return combine2_rotation(states[0], states[1], coeffs[0], coeffs[1], request.epsilon, RotationVariant::pe,
                               rng, request.rotation);
    case CombineMethod::rotation_iterate:
      require_pair();
      return combine2_rotation(states[0], states[1], coeffs[0], coeffs[1], request.epsilon,
                               RotationVariant::iterate, rng, request.rotation);
    case CombineMethod::multi_v1:
      return combine_multi_v1(states, coeffs, rng, request.use_amplification);
    case CombineMethod::multi_v2:
      return combine_multi_v2(states, coeffs, rng, request.use_amplification);
    case CombineMethod::recursive: {
      std::size_t m = 1;
      while (m < states.size()) m *= 2;
      return combine_recursive(states, coeffs, request.epsilon / static_cast<double>(m), RotationVariant::pe, rng,
                               request.rotation);
    }
  }
  fail(ErrorKind::InvalidArgument, "unknown combine method");
}

double v1_success_closed_form(std::span<const StateVector> states, std::span<const double> coeffs) {
  CVector y = CVector::Zero(static_cast<Eigen::Index>(states.front().dim()));
  double max_alpha = 0.0;
  for (std::size_t j = 0; j < states.size(); ++j) {
    y += coeffs[j] * states[j].amplitudes();
    max_alpha = std::max(max_alpha, std::abs(coeffs[j]));
  }
  const double m = static_cast<double>(states.size());
  return y.squaredNorm() / (max_alpha * max_alpha * m * m);
}

double v2_success_closed_form(std::span<const StateVector> states, std::span<const double> coeffs) {
  CVector y = CVector::Zero(static_cast<Eigen::Index>(states.front().dim()));
  double s = 0.0;
  for (std::size_t j = 0; j < states.size(); ++j) {
    y += coeffs[j] * states[j].amplitudes();
    s += std::abs(coeffs[j]);
  }
  return y.squaredNorm() / (s * s);
}

std::vector<StateVector> random_real_states(std::size_t m, std::size_t dim, bool orthonormal, RandomSource& rng) {
  std::vector<StateVector> out;
  out.reserve(m);
  if (orthonormal) {
    if (m > dim) fail(ErrorKind::InvalidArgument, "cannot draw more orthonormal states than the dimension");
    for (std::size_t j = 0; j < m; ++j) out.push_back(StateVector::basis(dim, j));
    return out;
  }
  for (std::size_t j = 0; j < m; ++j) {
    CVector v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = rng.normal();
    out.push_back(StateVector::from_raw(std::move(v)));
  }
  return out;
}

namespace {

std::vector<Table1Row> run_cell(const Table1Cell& cell, RandomSource rng, double epsilon) {
  const auto bare_states = random_real_states(cell.m, cell.dim, cell.orthonormal, rng);
  std::vector<PreparedState> states;
  for (const auto& s : bare_states) states.push_back(prepared(s));

  std::vector<Table1Row> rows;
  const auto run = [&](const char* name, auto&& body) {
    Table1Row row;
    row.cell = cell;
    row.method = name;
    try {
      const CombineReport r = body();
      row.success_probability = r.success_probability;
      row.expected_attempts = 1.0 / r.success_probability;
      row.attempts = r.attempts;
      row.ledger = r.ledger;
      row.fidelity = r.target_fidelity;
    } catch (const Error& e) {
      row.ok = false;
      row.error = std::string(to_string(e.kind())) + ": " + e.what();
    }
    rows.push_back(std::move(row));
  };
  run("multi-v1", [&] { return combine_multi_v1(states, cell.coeffs, rng, false); });
  run("multi-v2", [&] { return combine_multi_v2(states, cell.coeffs, rng, false); });
  run("recursive", [&] {
    CombineRequest req{states, cell.coeffs, CombineMethod::recursive, epsilon};
    return combine(req, rng);
  });
  return rows;
}

}  // namespace

std::vector<Table1Row> table1_bench(const std::vector<Table1Cell>& grid, std::uint64_t seed, double epsilon,
                                    unsigned threads) {
  std::vector<std::vector<Table1Row>> per_cell(grid.size());
  const RandomSource base(seed);
  const auto worker = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < grid.size(); i += stride) per_cell[i] = run_cell(grid[i], base.fork(i), epsilon);
  };
  const std::size_t n_threads = std::max<std::size_t>(1, std::min<std::size_t>(threads, grid.size()));
  if (n_threads == 1) {
    worker(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker, t, n_threads);
  }
  std::vector<Table1Row> rows;
  for (auto& cell_rows : per_cell) {
    for (auto& r : cell_rows) rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace lculab
