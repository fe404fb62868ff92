#include "lculab/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "lculab/estimate.hpp"
#include "lculab/fracpow.hpp"
#include "lculab/grover.hpp"
#include "lculab/lcu.hpp"
#include "lculab/version.hpp"

namespace lculab {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(std::size_t line, std::size_t column, const std::string& what) {
  std::ostringstream msg;
  msg << "line " << line << ", column " << column << ": " << what;
  fail(ErrorKind::InputParseError, msg.str());
}

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t offset) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::vector<double> parse_json_array(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    parse_fail(line, col, "malformed JSON array");
  }
  if (!doc.is_array()) parse_fail(1, 1, "top-level JSON value must be an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    if (!doc[i].is_number()) {
      std::ostringstream what;
      what << "element " << i << " is not a number";
      parse_fail(1, 1, what.str());
    }
    out.push_back(doc[i].get<double>());
  }
  return out;
}

std::vector<double> parse_plain(std::string_view text) {
  std::vector<double> out;
  std::size_t line = 1;
  std::size_t col = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    const char ch = text[i];
    if (ch == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (ch == ' ' || ch == '\t' || ch == '\r') {
      ++col;
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < text.size() && text[end] != ' ' && text[end] != '\t' && text[end] != '\r' && text[end] != '\n') {
      ++end;
    }
    const std::string_view token = text.substr(i, end - i);
    double value = 0.0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
      parse_fail(line, col, "not a decimal number: '" + std::string(token) + "'");
    }
    if (!std::isfinite(value)) parse_fail(line, col, "non-finite value '" + std::string(token) + "'");
    out.push_back(value);
    col += end - i;
    i = end;
  }
  return out;
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (res.ec != std::errc() || res.ptr != item.data() + item.size() || !std::isfinite(v)) {
      fail(ErrorKind::ConfigError, std::string("invalid ") + what + " entry '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

json ledger_json(const CostLedger& l) {
  return {{"oracle_queries", l.oracle_queries},
          {"input_preps", l.input_preps},
          {"elementary_ops", l.elementary_ops},
          {"estimator_samples", l.estimator_samples}};
}

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json config_json(const RunConfig& c) {
  return {{"command", c.command},
          {"method", c.method},
          {"suite", c.suite},
          {"n", c.n},
          {"m", c.m},
          {"dim", c.dim},
          {"coeffs", c.coeffs},
          {"orthonormal", c.orthonormal},
          {"eps", opt(c.eps)},
          {"bits", opt(c.bits)},
          {"max_k", opt(c.max_k)},
          {"shots", c.shots},
          {"seed", c.seed},
          {"seeds", c.seeds},
          {"t", c.t},
          {"marked", opt(c.marked)},
          {"file", c.file},
          {"values", c.values},
          {"format", c.format},
          {"cost_model", c.cost_model},
          {"angle_mode", c.angle_mode},
          {"variant", c.variant},
          {"amplify", c.amplify}};
}

struct Record {
  std::string method;
  json cell = json::object();
  CostLedger ledger;
  json metrics = json::object();
};

RotationOptions rotation_options(const RunConfig& c) {
  RotationOptions o;
  o.angle_mode = c.angle_mode == "estimated" ? AngleMode::estimated : AngleMode::exact;
  o.cost_model = c.cost_model == "paper" ? CostModel::paper : CostModel::sampling;
  o.bits = c.bits;
  o.max_k = c.max_k;
  return o;
}

json trace_json(const std::vector<TraceNode>& trace) {
  json arr = json::array();
  for (const auto& n : trace) {
    arr.push_back({{"level", n.level},
                   {"index", n.index},
                   {"alpha_left", n.alpha_left},
                   {"alpha_right", n.alpha_right},
                   {"phi", n.phi},
                   {"theta", n.theta},
                   {"t", n.t},
                   {"combined_alpha", n.combined_alpha},
                   {"passthrough", n.passthrough},
                   {"reversed", n.reversed}});
  }
  return arr;
}

std::vector<Record> run_lcu(const RunConfig& c) {
  const CombineMethod method = parse_combine_method(c.method.empty() ? "multi-v2" : c.method);
  const std::size_t m = c.m ? c.m : (c.coeffs.empty() ? 2 : c.coeffs.size());
  std::vector<double> coeffs = c.coeffs.empty() ? std::vector<double>(m, 1.0) : c.coeffs;
  if (coeffs.size() != m) fail(ErrorKind::ConfigError, "--coeffs must list exactly m values");
  if (c.orthonormal && m > c.dim) fail(ErrorKind::ConfigError, "--orthonormal needs dim >= m");

  RandomSource rng(c.seed);
  CombineRequest req;
  for (const auto& s : random_real_states(m, c.dim, c.orthonormal, rng)) req.states.push_back(prepared(s));
  req.coeffs = coeffs;
  req.method = method;
  req.epsilon = c.eps.value_or(1e-2);
  req.use_amplification = c.amplify;
  req.rotation = rotation_options(c);
  const CombineReport rep = combine(req, rng);

  Record r;
  r.method = std::string(to_string(method));
  r.cell = {{"m", m}, {"dim", c.dim}, {"orthonormal", c.orthonormal}};
  r.ledger = rep.ledger;
  r.metrics = {{"fidelity", rep.target_fidelity},
               {"success_probability", rep.success_probability},
               {"expected_attempts", 1.0 / rep.success_probability},
               {"attempts", rep.attempts},
               {"amplification_rounds", rep.amplification_rounds},
               {"iterate_k", rep.iterate_k},
               {"bits", rep.bits}};
  std::vector<StateVector> bare;
  for (const auto& s : req.states) bare.push_back(s.state);
  if (method == CombineMethod::multi_v1) r.metrics["closed_form"] = v1_success_closed_form(bare, coeffs);
  if (method == CombineMethod::multi_v2) r.metrics["closed_form"] = v2_success_closed_form(bare, coeffs);
  if (method == CombineMethod::recursive) r.metrics["tree"] = trace_json(rep.tree_trace);
  return {r};
}

UnitaryOp haar_unitary(std::size_t dim, RandomSource& rng) {
  const auto d = static_cast<Eigen::Index>(dim);
  CMatrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  }
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    const Complex rd = r(j, j);
    q.col(j) *= std::abs(rd) > 0 ? rd / std::abs(rd) : Complex(1.0);
  }
  CostLedger unit;
  unit.elementary_ops = 1;
  return UnitaryOp::dense(std::move(q), unit);
}

std::vector<Record> run_fracpow(const RunConfig& c) {
  const std::string method = c.method.empty() ? "eig" : c.method;
  RandomSource rng(c.seed);
  Record r;
  r.method = method;
  r.cell = {{"dim", c.dim}, {"t", c.t}};
  if (method == "eig" || method == "pe") {
    const UnitaryOp u = haar_unitary(c.dim, rng);
    const double eps = c.eps.value_or(1e-2);
    const UnitaryOp exact = frac_power_eig(u, c.t, eps);
    if (method == "eig") {
      r.ledger = exact.cost();
      const double inv = 1.0 / c.t;
      const double k = std::round(inv);
      json roundtrip = nullptr;
      if (std::abs(inv - k) < 1e-12) {
        CMatrix p = CMatrix::Identity(u.matrix().rows(), u.matrix().cols());
        const CMatrix v = exact.matrix();
        for (int i = 0; i < static_cast<int>(k); ++i) p = v * p;
        roundtrip = spectral_norm(p - u.matrix());
      }
      r.metrics = {{"roundtrip_error", roundtrip}, {"unitarity_defect", unitarity_defect(exact.matrix())}};
    } else {
      const unsigned bits = c.bits.value_or(8);
      const UnitaryOp v = frac_power_pe(u, c.t, bits);
      r.ledger = v.cost();
      r.metrics = {{"bits", bits},
                   {"distance_to_exact", operator_distance(v, exact)},
                   {"bound", 2.0 * std::numbers::pi * c.t / std::ldexp(1.0, static_cast<int>(bits))}};
    }
  } else if (method == "iterate") {
    const auto pair = random_real_states(2, c.dim, false, rng);
    CostLedger unit;
    unit.input_preps = 4;
    const RotationSpec spec = rotation_generator(pair[0], pair[1], unit);
    const double tol = tolerance_for_epsilon(c.eps.value_or(1e-2));
    const std::uint64_t max_k =
        c.max_k.value_or(static_cast<std::uint64_t>(std::ceil(16.0 * std::numbers::pi / tol)));
    const IterateResult it = frac_power_iterate(spec, c.t, tol, max_k);
    r.ledger = spec.power(it.k).cost();
    r.metrics = {{"angle", spec.angle()}, {"tolerance", tol}, {"k", it.k}, {"achieved_error", it.achieved_error}};
  } else {
    fail(ErrorKind::ConfigError, "unknown fracpow method '" + method + "'");
  }
  return {r};
}

std::vector<Record> run_grover(const RunConfig& c) {
  const SearchMethod method = parse_search_method(c.method.empty() ? "standard" : c.method);
  const std::size_t n = c.n ? c.n : 1024;
  RandomSource rng(c.seed);
  const std::size_t x0 = c.marked.value_or(static_cast<std::size_t>(rng.below(n)));
  const SearchInstance inst = make_instance(n, {x0});
  const SearchResult res = run_search(inst, method, rng);
  std::uint64_t hits = res.success ? 1 : 0;
  if (c.shots > 1 && method != SearchMethod::classical) {
    hits = 0;
    for (const auto& [k, count] : measure(res.output, c.shots, rng)) {
      if (inst.is_marked(k)) hits += count;
    }
  }
  Record r;
  r.method = res.method;
  r.cell = {{"n", n}, {"marked", x0}};
  r.ledger = res.ledger;
  r.metrics = {{"found", res.found},
               {"success", res.success},
               {"success_probability", res.success_probability},
               {"queries", res.queries},
               {"iterations", res.iterations},
               {"shots", c.shots},
               {"hits", hits}};
  return {r};
}

json prep_metrics(const PrepReport& p, std::size_t n) {
  json m = {{"n", n},
            {"fidelity", p.fidelity},
            {"success_probability", p.success_probability},
            {"expected_attempts", p.expected_attempts},
            {"attempts", p.attempts},
            {"inner_expected_attempts", p.inner_expected_attempts},
            {"amplification_rounds", p.amplification_rounds},
            {"kappa", p.kappa},
            {"q", p.q},
            {"bound_ratio", opt(p.bound_ratio)},
            {"bound_check", p.bound_holds ? json(*p.bound_holds ? "pass" : "fail") : json(nullptr)}};
  return m;
}

PrepBenchOptions prep_options(const RunConfig& c) {
  PrepBenchOptions o;
  o.epsilon = c.eps.value_or(1e-2);
  o.variant = parse_rotation_variant(c.variant);
  o.use_amplification = c.amplify;
  o.threads = c.threads;
  return o;
}

std::vector<Record> run_prep_command(const RunConfig& c) {
  const PrepMethod method = parse_prep_method(c.method.empty() ? "thm1" : c.method);
  const ClassicalVector x = !c.file.empty() ? parse_vector(c.file) : ClassicalVector::from(c.values);
  RandomSource rng(c.seed);
  const PrepReport p = run_prep(x, method, rng, prep_options(c));
  Record r;
  r.method = p.method;
  r.cell = {{"n", x.size()}, {"source", c.file.empty() ? "values" : c.file}};
  r.ledger = p.ledger;
  r.metrics = prep_metrics(p, x.size());
  return {r};
}

std::vector<Table1Cell> default_table1_grid() {
  std::vector<Table1Cell> grid;
  for (std::size_t m : {2, 4, 8, 16}) {
    for (bool orth : {true, false}) {
      Table1Cell uniform{m, 16, "uniform", std::vector<double>(m, 1.0), orth};
      Table1Cell ramp{m, 16, "ramp", {}, orth};
      Table1Cell skewed{m, 16, "skewed", std::vector<double>(m, 1.0), orth};
      for (std::size_t j = 0; j < m; ++j) ramp.coeffs.push_back(static_cast<double>(j + 1));
      skewed.coeffs.back() = 1e6;
      grid.push_back(uniform);
      grid.push_back(ramp);
      grid.push_back(skewed);
    }
  }
  return grid;
}

std::vector<ClassicalVector> spike_corpus() {
  std::vector<ClassicalVector> corpus;
  for (int e : {1, 5, 10, 15}) {
    std::vector<double> v(1024);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = (k % 3 == 0) ? -1.0 : 1.0;
    v[511] = std::ldexp(1.0, e);
    corpus.push_back(ClassicalVector::from(v));
  }
  return corpus;
}

std::vector<Record> run_bench(const RunConfig& c) {
  std::vector<Record> out;
  if (c.suite == "table1") {
    const auto grid = default_table1_grid();
    for (const auto& row : table1_bench(grid, c.seed, c.eps.value_or(1e-2), c.threads)) {
      Record r;
      r.method = row.method;
      r.cell = {{"m", row.cell.m},
                {"dim", row.cell.dim},
                {"profile", row.cell.profile},
                {"orthonormal", row.cell.orthonormal}};
      r.ledger = row.ledger;
      r.metrics = {{"ok", row.ok},
                   {"error", row.error},
                   {"success_probability", row.success_probability},
                   {"expected_attempts", row.expected_attempts},
                   {"attempts", row.attempts},
                   {"fidelity", row.fidelity},
                   {"ledger_total", row.ledger.total()}};
      out.push_back(std::move(r));
    }
  } else if (c.suite == "search") {
    std::vector<SearchMethod> methods;
    if (c.method.empty()) {
      methods = {SearchMethod::standard, SearchMethod::hadamard, SearchMethod::eig,
                 SearchMethod::pe,       SearchMethod::iterate,  SearchMethod::classical};
    } else {
      methods = {parse_search_method(c.method)};
    }
    const std::vector<std::size_t> sizes{16, 64, 256, 1024, 4096};
    std::vector<FitRecord> fits(methods.size());
    const auto worker = [&](std::size_t begin, std::size_t stride) {
      for (std::size_t i = begin; i < methods.size(); i += stride) {
        fits[i] = scaling_study(methods[i], sizes, c.seeds, c.seed);
      }
    };
    const std::size_t n_threads = std::max<std::size_t>(1, std::min<std::size_t>(c.threads, methods.size()));
    {
      std::vector<std::jthread> pool;
      for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker, t, n_threads);
      worker(0, n_threads);
    }
    for (std::size_t i = 0; i < methods.size(); ++i) {
      Record r;
      r.method = std::string(to_string(methods[i]));
      r.cell = {{"sizes", sizes}, {"seeds", c.seeds}};
      r.metrics = {{"exponent", fits[i].exponent},
                   {"intercept", fits[i].intercept},
                   {"r2", fits[i].r2},
                   {"mean_queries", fits[i].ys}};
      out.push_back(std::move(r));
    }
  } else if (c.suite == "prep") {
    const auto corpus = spike_corpus();
    const std::vector<PrepMethod> methods{PrepMethod::naive, PrepMethod::prop2, PrepMethod::thm1, PrepMethod::thm2};
    for (const auto& rec : prep_bench(corpus, methods, c.seed, prep_options(c))) {
      Record r;
      r.method = rec.report.method;
      r.cell = {{"vector", rec.vector_index}, {"kappa", corpus[rec.vector_index].kappa()}};
      r.ledger = rec.report.ledger;
      r.metrics = prep_metrics(rec.report, corpus[rec.vector_index].size());
      r.metrics["ok"] = rec.ok;
      r.metrics["error"] = rec.error;
      out.push_back(std::move(r));
    }
  } else {
    fail(ErrorKind::ConfigError, "unknown bench suite '" + c.suite + "'");
  }
  return out;
}

std::string csv_field(const json& v) {
  std::string s;
  if (v.is_string()) {
    s = v.get<std::string>();
  } else if (v.is_null()) {
    return "";
  } else {
    s = v.dump();
  }
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + "\"";
}

void write_records(const RunConfig& c, const std::vector<json>& records, std::ostream& out) {
  if (c.format == "json") {
    for (const auto& r : records) out << r.dump() << '\n';
    return;
  }
  std::vector<std::string> columns{"command", "method", "cell", "oracle_queries", "input_preps", "elementary_ops",
                                   "estimator_samples"};
  std::set<std::string> metric_keys;
  for (const auto& r : records) {
    for (const auto& [k, v] : r["metrics"].items()) {
      if (!v.is_array() && !v.is_object()) metric_keys.insert(k);
    }
  }
  columns.insert(columns.end(), metric_keys.begin(), metric_keys.end());
  if (c.timing) columns.push_back("wall_time_s");
  columns.push_back("version");
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  for (const auto& r : records) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      const std::string& col = columns[i];
      json v;
      if (col == "command" || col == "method" || col == "cell" || col == "version" || col == "wall_time_s") {
        v = r.value(col, json(nullptr));
      } else if (r["ledger"].contains(col)) {
        v = r["ledger"][col];
      } else {
        v = r["metrics"].value(col, json(nullptr));
      }
      out << (i ? "," : "") << csv_field(v);
    }
    out << '\n';
  }
}

json error_record(const std::string& command, ErrorKind kind, const std::string& message) {
  return {{"command", command},
          {"version", kVersion},
          {"error", {{"kind", to_string(kind)}, {"message", message}, {"exit_code", exit_code(kind)}}}};
}

}  // namespace

std::vector<double> parse_vector_text(std::string_view text) {
  std::size_t first = 0;
  while (first < text.size() && std::isspace(static_cast<unsigned char>(text[first]))) ++first;
  if (first == text.size()) parse_fail(1, 1, "no numbers found");
  if (text[first] == '[') return parse_json_array(text);
  return parse_plain(text);
}

ClassicalVector parse_vector(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::InputParseError, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::vector<double> values = parse_vector_text(buf.str());
  if (values.empty()) parse_fail(1, 1, "no numbers found");
  return ClassicalVector::from(values);
}

int exit_code(ErrorKind kind) { return 10 + static_cast<int>(kind); }

void validate(const RunConfig& c) {
  static const std::set<std::string> commands{"lcu", "fracpow", "grover", "prep", "bench"};
  if (!commands.count(c.command)) fail(ErrorKind::ConfigError, "unknown command '" + c.command + "'");
  if (c.eps && !(*c.eps > 0.0 && *c.eps < 1.0)) fail(ErrorKind::ConfigError, "--eps must lie in (0, 1)");
  if (c.bits && (*c.bits < 1 || *c.bits > 20)) fail(ErrorKind::ConfigError, "--bits must lie in [1, 20]");
  if (c.max_k && *c.max_k == 0) fail(ErrorKind::ConfigError, "--max-k must be positive");
  if (c.shots == 0) fail(ErrorKind::ConfigError, "--shots must be positive");
  if (c.seeds == 0) fail(ErrorKind::ConfigError, "--seeds must be positive");
  if (c.dim == 0 || c.dim > 4096) fail(ErrorKind::ConfigError, "--dim must lie in [1, 4096]");
  if (c.n > 4096) fail(ErrorKind::ConfigError, "--n must be at most 4096");
  if (c.m == 1 || c.m > 64) fail(ErrorKind::ConfigError, "--m must lie in [2, 64]");
  if (!(c.t > 0.0 && c.t < 1.0)) fail(ErrorKind::ConfigError, "--t must lie in (0, 1)");
  if (c.marked && c.n && *c.marked >= c.n) fail(ErrorKind::ConfigError, "--marked must be below --n");
  if (c.format != "json" && c.format != "csv") fail(ErrorKind::ConfigError, "--format must be json or csv");
  if (c.cost_model != "sampling" && c.cost_model != "paper") {
    fail(ErrorKind::ConfigError, "--cost-model must be sampling or paper");
  }
  if (c.angle_mode != "exact" && c.angle_mode != "estimated") {
    fail(ErrorKind::ConfigError, "--angle-mode must be exact or estimated");
  }
  if (c.variant != "eig" && c.variant != "pe" && c.variant != "iterate") {
    fail(ErrorKind::ConfigError, "--variant must be eig, pe or iterate");
  }
  if (c.command == "prep" && c.file.empty() && c.values.empty()) {
    fail(ErrorKind::ConfigError, "prep needs --file or --values");
  }
  if (c.threads == 0) fail(ErrorKind::ConfigError, "thread count must be positive");
}

int run(const RunConfig& config, std::ostream& out) {
  try {
    validate(config);
    const auto start = std::chrono::steady_clock::now();
    std::vector<Record> records;
    if (config.command == "lcu") records = run_lcu(config);
    if (config.command == "fracpow") records = run_fracpow(config);
    if (config.command == "grover") records = run_grover(config);
    if (config.command == "prep") records = run_prep_command(config);
    if (config.command == "bench") records = run_bench(config);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const json cfg = config_json(config);
    std::vector<json> docs;
    for (auto& r : records) {
      json doc = {{"command", config.command},
                  {"method", r.method},
                  {"cell", r.cell},
                  {"config", cfg},
                  {"ledger", ledger_json(r.ledger)},
                  {"ledger_total", r.ledger.total()},
                  {"metrics", r.metrics},
                  {"version", kVersion}};
      if (config.timing) doc["wall_time_s"] = wall;
      docs.push_back(std::move(doc));
    }
    write_records(config, docs, out);
    return 0;
  } catch (const Error& e) {
    out << error_record(config.command, e.kind(), e.what()).dump() << '\n';
    return exit_code(e.kind());
  }
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"lculab: linear combination of states, fractional powers, search and state preparation"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  std::string coeffs_text;
  std::string values_text;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", config.seed, "RNG seed (default 0)");
    sub->add_option("--eps", config.eps, "Precision target");
    sub->add_option("--bits", config.bits, "Phase-estimation bits");
    sub->add_option("--max-k", config.max_k, "Integer-iterate scan limit");
    sub->add_option("--shots", config.shots, "Measurement shots");
    sub->add_option("--method", config.method, "Method name");
    sub->add_option("--format", config.format, "json or csv");
    sub->add_option("--cost-model", config.cost_model, "sampling or paper");
    sub->add_option("--angle-mode", config.angle_mode, "exact or estimated");
    sub->add_option("--variant", config.variant, "Rotation route: eig, pe or iterate");
    sub->add_flag("--amplify", config.amplify, "Use amplitude amplification");
    sub->add_option("--out", config.out, "Write records to this path");
    sub->add_flag("--timing", config.timing, "Add wall-clock time to records");
  };
  CLI::App* lcu = app.add_subcommand("lcu", "Combine m random states");
  add_common(lcu);
  lcu->add_option("--m", config.m, "Number of states");
  lcu->add_option("--dim", config.dim, "State dimension");
  lcu->add_option("--coeffs", coeffs_text, "Comma-separated weights");
  lcu->add_flag("--orthonormal", config.orthonormal, "Use basis states");

  CLI::App* fracpow = app.add_subcommand("fracpow", "Fractional power of a random unitary");
  add_common(fracpow);
  fracpow->add_option("--dim", config.dim, "Dimension");
  fracpow->add_option("--t", config.t, "Power in (0, 1)");

  CLI::App* grover = app.add_subcommand("grover", "Single-marked search");
  add_common(grover);
  grover->add_option("--n", config.n, "Search space size N");
  grover->add_option("--marked", config.marked, "Marked index (default: drawn from the seed)");

  CLI::App* prep = app.add_subcommand("prep", "Prepare a classical vector");
  add_common(prep);
  prep->add_option("--file", config.file, "Vector file (JSON array or whitespace-separated)");
  prep->add_option("--values", values_text, "Comma-separated entries");

  CLI::App* bench = app.add_subcommand("bench", "Benchmark suites");
  add_common(bench);
  bench->add_option("--suite", config.suite, "table1, search or prep");
  bench->add_option("--seeds", config.seeds, "Seeds per size (search suite)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    out << error_record(config.command, ErrorKind::ConfigError, e.what()).dump() << '\n';
    err << e.what() << '\n';
    return exit_code(ErrorKind::ConfigError);
  }
  for (CLI::App* sub : {lcu, fracpow, grover, prep, bench}) {
    if (sub->parsed()) config.command = sub->get_name();
  }

  try {
    if (!coeffs_text.empty()) config.coeffs = parse_list(coeffs_text, "--coeffs");
    if (!values_text.empty()) config.values = parse_list(values_text, "--values");
    if (const char* env = std::getenv("LCULAB_THREADS"); env && *env) {
      unsigned threads = 0;
      const std::string_view s(env);
      const auto res = std::from_chars(s.data(), s.data() + s.size(), threads);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size() || threads == 0) {
        fail(ErrorKind::ConfigError, "LCULAB_THREADS must be a positive integer");
      }
      config.threads = threads;
    }
  } catch (const Error& e) {
    out << error_record(config.command, e.kind(), e.what()).dump() << '\n';
    return exit_code(e.kind());
  }

  if (config.out.empty()) return run(config, out);
  std::ofstream file(config.out, std::ios::binary);
  if (!file) {
    out << error_record(config.command, ErrorKind::ConfigError, "cannot open --out path").dump() << '\n';
    return exit_code(ErrorKind::ConfigError);
  }
  return run(config, file);
}

}  // namespace lculab
