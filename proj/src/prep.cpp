#include "lculab/prep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace lculab {

namespace {

CostLedger elementary(std::uint64_t n) {
  CostLedger c;
  c.elementary_ops = n;
  return c;
}

PrepReport from_combine(std::string method, const ClassicalVector& x, const CombineReport& r) {
  PrepReport p{std::move(method), r.output};
  p.fidelity = fidelity(r.output, x.state());
  p.success_probability = r.success_probability;
  p.expected_attempts = 1.0 / r.success_probability;
  p.attempts = r.attempts;
  p.amplification_rounds = r.amplification_rounds;
  p.ledger = r.ledger;
  p.kappa = x.kappa();
  return p;
}

/// Exact a + b = s + err.
std::pair<double, double> two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

}  // namespace

ClassicalVector ClassicalVector::from(std::span<const double> entries) {
  if (entries.empty()) fail(ErrorKind::InvalidArgument, "vector must have at least one entry");
  ClassicalVector v;
  v.entries_.assign(entries.begin(), entries.end());
  double sq = 0.0;
  v.min_abs_ = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < v.entries_.size(); ++k) {
    const double e = v.entries_[k];
    if (!std::isfinite(e)) fail(ErrorKind::InvalidArgument, "vector entries must be finite");
    if (e == 0.0) continue;
    v.support_.push_back(k);
    v.max_abs_ = std::max(v.max_abs_, std::abs(e));
    v.min_abs_ = std::min(v.min_abs_, std::abs(e));
    sq += e * e;
  }
  if (v.support_.empty()) fail(ErrorKind::ZeroVector, "vector has no nonzero entry");
  v.norm_ = std::sqrt(sq);
  return v;
}

StateVector ClassicalVector::state() const { return StateVector::from_real(entries_); }

NaivePrep prep_naive(const ClassicalVector& x) {
  const StateVector s = x.state();
  const auto n = static_cast<std::uint64_t>(x.size());
  UnitaryOp u = householder_prep(s, elementary(n * n));
  return {u, s, u.cost()};
}

PrepReport prep_uniformish(const ClassicalVector& x, RandomSource& rng, bool use_amplification,
                           UniformishCircuit circuit) {
  const std::size_t n = x.size();
  const auto& support = x.support();
  const std::string name = circuit == UniformishCircuit::merged ? "prop2" : "prop2-literal";
  if (support.size() == 1) {
    const StateVector out = x.state();
    PrepReport p{name, out, fidelity(out, x.state())};
    p.kappa = 1.0;
    p.ledger = elementary(1);
    return p;
  }

  if (circuit == UniformishCircuit::literal) {
    std::vector<PreparedState> states;
    std::vector<double> coeffs;
    for (auto j : support) {
      states.push_back(prepared(StateVector::basis(n, j)));
      coeffs.push_back(x.entries()[j]);
    }
    return from_combine(name, x, combine_multi_v1(states, coeffs, rng, use_amplification));
  }

  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(support.size()));
  CVector spread = CVector::Zero(static_cast<Eigen::Index>(n));
  RVector cosines = RVector::Ones(static_cast<Eigen::Index>(n));
  RVector sines = RVector::Zero(static_cast<Eigen::Index>(n));
  for (auto j : support) {
    const auto k = static_cast<Eigen::Index>(j);
    spread[k] = inv_sqrt;
    cosines[k] = x.entries()[j] / x.max_abs();
    sines[k] = std::sqrt(std::max(0.0, 1.0 - cosines[k] * cosines[k]));
  }
  const UnitaryOp w = householder_prep(StateVector::from_raw(std::move(spread)), elementary(1));
  const UnitaryOp circuit_op = UnitaryOp::product({
      UnitaryOp::kron(UnitaryOp::identity(2), w),
      UnitaryOp::controlled_ancilla_rotation(std::move(cosines), std::move(sines), elementary(1)),
  });
  const double amp = x.norm() * inv_sqrt / x.max_abs();
  return from_combine(name, x, run_postselective(circuit_op, n, amp * amp, x.state(), rng, use_amplification));
}

BinDecomposition decompose_bins(const ClassicalVector& x) {
  const double lo = x.min_abs_nonzero();
  BinDecomposition d;
  d.q = 1;
  while (std::ldexp(lo, static_cast<int>(d.q)) < x.max_abs()) ++d.q;
  const std::size_t n = x.size();
  d.bins.assign(d.q, std::vector<double>(n, 0.0));
  for (std::size_t j = 1; j <= d.q; ++j) {
    d.intervals.emplace_back(std::ldexp(lo, static_cast<int>(j) - 1), std::ldexp(lo, static_cast<int>(j)));
  }
  for (auto k : x.support()) {
    const double mag = std::abs(x.entries()[k]);
    std::size_t j = 1;
    while (j < d.q && mag >= std::ldexp(lo, static_cast<int>(j))) ++j;
    d.bins[j - 1][k] = x.entries()[k];
  }
  for (const auto& bin : d.bins) {
    double sq = 0.0;
    for (double e : bin) sq += e * e;
    d.lambdas.push_back(std::sqrt(sq) / x.norm());
  }
  return d;
}

PrepReport prep_thm1(const ClassicalVector& x, RandomSource& rng) {
  const BinDecomposition d = decompose_bins(x);
  std::vector<PreparedState> states;
  std::vector<double> weights;
  double inner_attempts = 1.0;
  for (std::size_t j = 0; j < d.q; ++j) {
    if (d.lambdas[j] == 0.0) continue;
    const ClassicalVector bin = ClassicalVector::from(d.bins[j]);
    const PrepReport r = prep_uniformish(bin, rng, false);
    inner_attempts = std::max(inner_attempts, r.expected_attempts);
    states.push_back({r.output, r.ledger});
    weights.push_back(d.lambdas[j]);
  }
  PrepReport p;
  if (states.size() == 1) {
    p = prep_uniformish(x, rng, false);
    p.inner_expected_attempts = p.expected_attempts;
    p.success_probability = 1.0;
    p.expected_attempts = 1.0;
    p.attempts = 1;
  } else {
    p = from_combine("thm1", x, combine_multi_v2(states, weights, rng, false));
    p.inner_expected_attempts = inner_attempts;
  }
  p.method = "thm1";
  p.q = d.q;
  p.kappa = x.kappa();
  return p;
}

double SignShift::bound_ratio() const { return (norm_y * norm_y + norm_z * norm_z) / (norm_x * norm_x); }

SignShift sign_shift(const ClassicalVector& x) {
  SignShift s;
  s.m = x.max_abs();
  s.norm_x = x.norm();
  double sy = 0.0;
  double sz = 0.0;
  for (double e : x.entries()) {
    const double y = e < 0.0 ? -s.m : s.m;
    const auto [hi, lo] = two_sum(e, y);
    s.y.push_back(y);
    s.z_hi.push_back(hi);
    s.z_lo.push_back(lo);
    sy += y * y;
    sz += hi * hi;
  }
  s.norm_y = std::sqrt(sy);
  s.norm_z = std::sqrt(sz);
  return s;
}

PrepReport prep_thm2(const ClassicalVector& x, double epsilon, RotationVariant variant, RandomSource& rng,
                     const RotationOptions& options) {
  const SignShift shift = sign_shift(x);
  const PrepReport yr = prep_uniformish(ClassicalVector::from(shift.y), rng, false);
  const PrepReport zr = prep_uniformish(ClassicalVector::from(shift.z_hi), rng, false);
  PrepReport p;
  const double c = inner(zr.output, yr.output).real();
  if (std::abs(c) > 1.0 - 1e-12) {
    // z is parallel to y, hence so is x.
    p = PrepReport{"thm2", yr.output};
    p.ledger = yr.ledger;
  } else {
    const CombineReport r = combine2_rotation({zr.output, zr.ledger}, {yr.output, yr.ledger},
                                              shift.norm_z / shift.norm_x, -shift.norm_y / shift.norm_x, epsilon,
                                              variant, rng, options);
    p = from_combine("thm2", x, r);
  }
  p.method = "thm2";
  p.fidelity = fidelity(p.output, x.state());
  p.kappa = x.kappa();
  p.inner_expected_attempts = std::max(yr.expected_attempts, zr.expected_attempts);
  p.bound_ratio = shift.bound_ratio();
  p.bound_holds = *p.bound_ratio <= 3.0 * p.kappa * p.kappa + 1.0;
  return p;
}

std::string_view to_string(PrepMethod m) {
  switch (m) {
    case PrepMethod::naive: return "naive";
    case PrepMethod::prop2: return "prop2";
    case PrepMethod::prop2_literal: return "prop2-literal";
    case PrepMethod::thm1: return "thm1";
    case PrepMethod::thm2: return "thm2";
  }
  return "unknown";
}

PrepMethod parse_prep_method(std::string_view name) {
  for (auto m : {PrepMethod::naive, PrepMethod::prop2, PrepMethod::prop2_literal, PrepMethod::thm1, PrepMethod::thm2}) {
    if (to_string(m) == name) return m;
  }
  fail(ErrorKind::ConfigError, "unknown prep method '" + std::string(name) + "'");
}

PrepReport run_prep(const ClassicalVector& x, PrepMethod method, RandomSource& rng, const PrepBenchOptions& options) {
  switch (method) {
    case PrepMethod::naive: {
      const NaivePrep np = prep_naive(x);
      PrepReport p{"naive", np.state, fidelity(np.state, x.state())};
      p.ledger = np.ledger;
      p.kappa = x.kappa();
      return p;
    }
    case PrepMethod::prop2:
      return prep_uniformish(x, rng, options.use_amplification, UniformishCircuit::merged);
    case PrepMethod::prop2_literal:
      return prep_uniformish(x, rng, options.use_amplification, UniformishCircuit::literal);
    case PrepMethod::thm1:
      return prep_thm1(x, rng);
    case PrepMethod::thm2:
      return prep_thm2(x, options.epsilon, options.variant, rng);
  }
  fail(ErrorKind::InvalidArgument, "unknown prep method");
}

std::vector<PrepRecord> prep_bench(const std::vector<ClassicalVector>& corpus, std::span<const PrepMethod> methods,
                                   std::uint64_t seed, const PrepBenchOptions& options) {
  if (corpus.empty()) fail(ErrorKind::InvalidArgument, "prep corpus is empty");
  std::vector<std::vector<PrepRecord>> per_vector(corpus.size());
  const RandomSource base(seed);
  const auto worker = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < corpus.size(); i += stride) {
      RandomSource rng = base.fork(i);
      for (auto m : methods) {
        PrepRecord rec;
        rec.vector_index = i;
        try {
          rec.report = run_prep(corpus[i], m, rng, options);
        } catch (const Error& e) {
          rec.ok = false;
          rec.report.method = std::string(to_string(m));
          rec.error = std::string(to_string(e.kind())) + ": " + e.what();
        }
        per_vector[i].push_back(std::move(rec));
      }
    }
  };
  const std::size_t n_threads = std::max<std::size_t>(1, std::min<std::size_t>(options.threads, corpus.size()));
  if (n_threads == 1) {
    worker(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker, t, n_threads);
  }
  std::vector<PrepRecord> out;
  for (auto& v : per_vector) {
    for (auto& r : v) out.push_back(std::move(r));
  }
  return out;
}

}  // namespace lculab
