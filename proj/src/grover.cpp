#include "lculab/grover.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace lculab {

bool SearchInstance::is_marked(std::size_t x) const {
  return std::binary_search(marked_.begin(), marked_.end(), x);
}

SearchInstance make_instance(std::size_t n, std::vector<std::size_t> marked) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "search space must be non-empty");
  if (marked.empty()) fail(ErrorKind::EmptyMarkedSet, "the marked set is empty");
  std::sort(marked.begin(), marked.end());
  marked.erase(std::unique(marked.begin(), marked.end()), marked.end());
  if (marked.back() >= n) fail(ErrorKind::InvalidArgument, "marked index outside the search space");
  CVector diag = CVector::Ones(static_cast<Eigen::Index>(n));
  for (auto x : marked) diag[static_cast<Eigen::Index>(x)] = -1.0;
  CostLedger query;
  query.oracle_queries = 1;
  return SearchInstance(n, std::move(marked), UnitaryOp::diagonal(std::move(diag), query));
}

std::uint64_t grover_iterations(std::size_t n, std::size_t m) {
  if (m == 0 || m > n) fail(ErrorKind::InvalidArgument, "need 1 <= M <= N");
  return static_cast<std::uint64_t>(
      std::floor(std::numbers::pi / 4.0 * std::sqrt(static_cast<double>(n) / static_cast<double>(m))));
}

namespace {

double marked_mass(const SearchInstance& inst, const StateVector& s) {
  double p = 0.0;
  for (auto x : inst.marked()) p += std::norm(s[x]);
  return p;
}

SearchResult finish(const SearchInstance& inst, std::string method, const StateVector& out, RandomSource& rng,
                    const CostLedger& ledger, std::uint64_t iterations, double success_probability) {
  SearchResult r;
  r.method = std::move(method);
  r.found = measure_once(out, rng);
  r.success = inst.is_marked(r.found);
  r.ledger = ledger;
  r.queries = ledger.oracle_queries;
  r.iterations = iterations;
  r.success_probability = success_probability;
  r.output = out;
  return r;
}

}  // namespace

SearchResult grover_standard(const SearchInstance& inst, RandomSource& rng, std::optional<std::uint64_t> iterations) {
  const std::size_t n = inst.size();
  if (inst.marked_count() >= n) fail(ErrorKind::InvalidArgument, "standard search needs an unmarked item");
  const std::uint64_t k = iterations.value_or(grover_iterations(n, inst.marked_count()));
  const StateVector phi = StateVector::uniform(n);
  CostLedger step_cost;
  step_cost.elementary_ops = 1;
  // 2|phi><phi| - I = -(I - 2|phi><phi|)
  const UnitaryOp diffusion = UnitaryOp::reflection(phi.amplitudes(), -1.0, step_cost);
  const UnitaryOp g = UnitaryOp::product({inst.oracle(), diffusion});

  CostLedger ledger;
  StateVector s = phi;
  for (std::uint64_t i = 0; i < k; ++i) s = apply(g, s, ledger);
  return finish(inst, "standard", s, rng, ledger, k, marked_mass(inst, s));
}

SearchStates search_states(const SearchInstance& inst, CostLedger& ledger) {
  StateVector a = StateVector::uniform(inst.size());
  StateVector b = apply(inst.oracle(), a, ledger);
  return {std::move(a), std::move(b)};
}

std::string_view to_string(SearchMethod m) {
  switch (m) {
    case SearchMethod::standard: return "standard";
    case SearchMethod::hadamard: return "hadamard";
    case SearchMethod::eig: return "eig";
    case SearchMethod::pe: return "pe";
    case SearchMethod::iterate: return "iterate";
    case SearchMethod::classical: return "classical";
  }
  return "unknown";
}

SearchMethod parse_search_method(std::string_view name) {
  for (auto m : {SearchMethod::standard, SearchMethod::hadamard, SearchMethod::eig, SearchMethod::pe,
                 SearchMethod::iterate, SearchMethod::classical}) {
    if (to_string(m) == name) return m;
  }
  fail(ErrorKind::ConfigError, "unknown search method '" + std::string(name) + "'");
}

SearchResult search_lcu(const SearchInstance& inst, SearchMethod method, RandomSource& rng,
                        const LcuSearchOptions& options) {
  if (inst.marked_count() != 1) fail(ErrorKind::UnsupportedMultiplicity, "combination search needs exactly one marked item");
  const std::size_t n = inst.size();
  const double root_n = std::sqrt(static_cast<double>(n));

  CostLedger b_cost;
  b_cost.input_preps = 1;
  SearchStates st = search_states(inst, b_cost);
  // -O_f a has +1/sqrt(N) on the marked item and -1/sqrt(N) elsewhere, so
  // a + (-O_f a) is proportional to the marked basis state.
  const PreparedState a = prepared(st.a);
  const PreparedState b{st.b.negated(), b_cost};
  const double epsilon = std::min(options.c / root_n, 0.5);
  const std::size_t x0 = inst.marked().front();

  CombineReport rep;
  std::uint64_t iterations = 0;
  RotationOptions ro;
  switch (method) {
    case SearchMethod::hadamard:
      rep = combine2_hadamard(a, b, rng, true);
      iterations = rep.amplification_rounds;
      break;
    case SearchMethod::eig:
      rep = combine2_rotation(a, b, 1.0, 1.0, epsilon, RotationVariant::eig, rng, ro);
      iterations = static_cast<std::uint64_t>(std::ceil(1.0 / epsilon));
      break;
    case SearchMethod::pe:
      ro.bits = static_cast<unsigned>(std::ceil(std::log2(root_n))) + options.guard_bits;
      rep = combine2_rotation(a, b, 1.0, 1.0, epsilon, RotationVariant::pe, rng, ro);
      iterations = std::uint64_t{1} << rep.bits;
      break;
    case SearchMethod::iterate:
      ro.max_k = static_cast<std::uint64_t>(std::ceil(options.max_k_factor * root_n));
      rep = combine2_rotation(a, b, 1.0, 1.0, epsilon, RotationVariant::iterate, rng, ro);
      iterations = rep.iterate_k;
      break;
    default:
      fail(ErrorKind::InvalidArgument, "not a combination search method");
  }
  const double p = rep.success_probability * std::norm(rep.output[x0]);
  return finish(inst, std::string(to_string(method)), rep.output, rng, rep.ledger, iterations, p);
}

SearchResult classical_search(const SearchInstance& inst, RandomSource& rng) {
  std::vector<std::size_t> order(inst.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  SearchResult r;
  r.method = "classical";
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(order.size() - i));
    std::swap(order[i], order[j]);
    ++r.ledger.oracle_queries;
    if (inst.is_marked(order[i])) {
      r.found = order[i];
      r.success = true;
      break;
    }
  }
  r.queries = r.ledger.oracle_queries;
  r.iterations = r.queries;
  r.success_probability = 1.0;
  return r;
}

SearchResult run_search(const SearchInstance& inst, SearchMethod method, RandomSource& rng,
                        const LcuSearchOptions& options) {
  switch (method) {
    case SearchMethod::standard: return grover_standard(inst, rng);
    case SearchMethod::classical: return classical_search(inst, rng);
    default: return search_lcu(inst, method, rng, options);
  }
}

FitRecord fit_power_law(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) fail(ErrorKind::InvalidArgument, "fit needs at least two points");
  const auto n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) fail(ErrorKind::InvalidArgument, "power-law fit needs positive data");
    design(i, 0) = std::log(xs[i]);
    design(i, 1) = 1.0;
    rhs[i] = std::log(ys[i]);
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(rhs);
  const Eigen::VectorXd resid = rhs - design * coef;
  const double ss_tot = (rhs.array() - rhs.mean()).square().sum();
  FitRecord fit;
  fit.exponent = coef[0];
  fit.intercept = coef[1];
  fit.r2 = ss_tot > 0.0 ? 1.0 - resid.squaredNorm() / ss_tot : 1.0;
  fit.xs.assign(xs.begin(), xs.end());
  fit.ys.assign(ys.begin(), ys.end());
  return fit;
}

FitRecord scaling_study(SearchMethod method, std::span<const std::size_t> sizes, std::uint64_t seeds,
                        std::uint64_t base_seed, const LcuSearchOptions& options) {
  if (sizes.size() < 4) fail(ErrorKind::InvalidArgument, "scaling study needs at least four sizes");
  if (seeds == 0) fail(ErrorKind::InvalidArgument, "scaling study needs at least one seed");
  const RandomSource base(base_seed);
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const std::size_t n = sizes[i];
    if (n < 2 || (n & (n - 1)) != 0) fail(ErrorKind::InvalidArgument, "scaling sizes must be powers of two");
    double total = 0.0;
    for (std::uint64_t s = 0; s < seeds; ++s) {
      RandomSource rng = base.fork(i * seeds + s);
      const SearchInstance inst = make_instance(n, {static_cast<std::size_t>(rng.below(n))});
      total += static_cast<double>(run_search(inst, method, rng, options).queries);
    }
    xs.push_back(static_cast<double>(n));
    ys.push_back(total / static_cast<double>(seeds));
  }
  return fit_power_law(xs, ys);
}

}  // namespace lculab
