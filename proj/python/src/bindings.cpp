#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "lculab/cli.hpp"
#include "lculab/estimate.hpp"
#include "lculab/fracpow.hpp"
#include "lculab/grover.hpp"
#include "lculab/lcu.hpp"
#include "lculab/prep.hpp"
#include "lculab/version.hpp"

namespace py = pybind11;
using namespace lculab;

namespace {

// Leaked on purpose: the type must outlive interpreter teardown.
py::object* error_type = nullptr;

py::dict ledger_dict(const CostLedger& l) {
  py::dict d;
  d["oracle_queries"] = l.oracle_queries;
  d["input_preps"] = l.input_preps;
  d["elementary_ops"] = l.elementary_ops;
  d["estimator_samples"] = l.estimator_samples;
  return d;
}

StateVector to_state(const CVector& v) { return StateVector::from_raw(v); }

std::vector<PreparedState> to_prepared(const std::vector<CVector>& vs) {
  std::vector<PreparedState> out;
  for (const auto& v : vs) out.push_back(prepared(to_state(v)));
  return out;
}

py::dict combine_dict(const CombineReport& r) {
  py::dict d;
  d["output"] = r.output.amplitudes();
  d["target_fidelity"] = r.target_fidelity;
  d["success_probability"] = r.success_probability;
  d["attempts"] = r.attempts;
  d["amplification_rounds"] = r.amplification_rounds;
  d["ledger"] = ledger_dict(r.ledger);
  d["iterate_k"] = r.iterate_k;
  d["bits"] = r.bits;
  d["tree_nodes"] = r.tree_trace.size();
  return d;
}

CostModel parse_cost_model(const std::string& name) {
  if (name == "sampling") return CostModel::sampling;
  if (name == "paper") return CostModel::paper;
  throw Error(ErrorKind::InvalidArgument, "unknown cost model: " + name);
}

}  // namespace

PYBIND11_MODULE(_lculab, m) {
  m.doc() = "State combination and preparation by linear combinations of unitaries";
  m.attr("__version__") = kVersion;

  error_type = new py::object(py::exception<Error>(m, "LculabError"));
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = (*error_type)(e.what());
      inst.attr("kind") = std::string(to_string(e.kind()));
      if (auto* na = dynamic_cast<const NoApproximationError*>(&e)) {
        inst.attr("best_k") = na->best_k();
        inst.attr("best_error") = na->best_error();
      }
      PyErr_SetObject(error_type->ptr(), inst.ptr());
    }
  });

  m.def("normalize", [](const CVector& v) { return to_state(v).amplitudes(); }, py::arg("amplitudes"));
  m.def("inner", [](const CVector& a, const CVector& b) { return inner(to_state(a), to_state(b)); });
  m.def("fidelity", [](const CVector& a, const CVector& b) { return fidelity(to_state(a), to_state(b)); });
  m.def("swap_test_prob", [](const CVector& a, const CVector& b) { return swap_test_prob(to_state(a), to_state(b)); });

  m.def("estimator_samples", &estimator_samples, py::arg("epsilon"));
  m.def(
      "estimate_angle",
      [](const CVector& a, const CVector& b, double eps, std::uint64_t seed, const std::string& model) {
        RandomSource rng(seed);
        CostLedger ledger;
        const AngleEstimate e = estimate_angle(to_state(a), to_state(b), eps, rng, ledger, parse_cost_model(model));
        py::dict d;
        d["value"] = e.value;
        d["half_width"] = e.half_width;
        d["samples_used"] = e.samples_used;
        d["ledger"] = ledger_dict(ledger);
        return d;
      },
      py::arg("a"), py::arg("b"), py::arg("epsilon"), py::arg("seed") = 0, py::arg("cost_model") = "sampling");
  m.def(
      "overlap_magnitude",
      [](const CVector& a, const CVector& b, double eps, std::uint64_t seed) {
        RandomSource rng(seed);
        CostLedger ledger;
        return overlap_magnitude(to_state(a), to_state(b), eps, rng, ledger).estimate;
      },
      py::arg("a"), py::arg("b"), py::arg("epsilon"), py::arg("seed") = 0);
  m.def(
      "overlap_signed",
      [](const CVector& a, const CVector& b, double eps, std::uint64_t seed) {
        RandomSource rng(seed);
        CostLedger ledger;
        return overlap_signed(to_state(a), to_state(b), eps, rng, ledger).estimate;
      },
      py::arg("a"), py::arg("b"), py::arg("epsilon"), py::arg("seed") = 0);

  m.def(
      "rotation_generator",
      [](const CVector& a, const CVector& b) { return rotation_generator_closed_form(to_state(a), to_state(b)).matrix(); },
      py::arg("a"), py::arg("b"));
  m.def(
      "frac_power_iterate",
      [](double angle, double t, double tol, std::uint64_t max_k) {
        const IterateResult r = frac_power_iterate(angle, t, tol, max_k);
        return py::make_tuple(r.k, r.achieved_error);
      },
      py::arg("angle"), py::arg("t"), py::arg("tol"), py::arg("max_k"));
  m.def("quantize_phase", &quantize_phase, py::arg("phase"), py::arg("bits"));

  m.def(
      "combine",
      [](const std::vector<CVector>& states, const std::vector<double>& coeffs, const std::string& method,
         double epsilon, bool amplify, std::uint64_t seed) {
        CombineRequest req;
        req.states = to_prepared(states);
        req.coeffs = coeffs;
        req.method = parse_combine_method(method);
        req.epsilon = epsilon;
        req.use_amplification = amplify;
        RandomSource rng(seed);
        return combine_dict(combine(req, rng));
      },
      py::arg("states"), py::arg("coeffs"), py::arg("method") = "multi-v2", py::arg("epsilon") = 1e-2,
      py::arg("amplify") = false, py::arg("seed") = 0);
  m.def("v1_success", [](const std::vector<CVector>& states, const std::vector<double>& coeffs) {
    std::vector<StateVector> s;
    for (const auto& v : states) s.push_back(to_state(v));
    return v1_success_closed_form(s, coeffs);
  });
  m.def("v2_success", [](const std::vector<CVector>& states, const std::vector<double>& coeffs) {
    std::vector<StateVector> s;
    for (const auto& v : states) s.push_back(to_state(v));
    return v2_success_closed_form(s, coeffs);
  });

  m.def("grover_iterations", &grover_iterations, py::arg("n"), py::arg("m") = 1);
  m.def(
      "search",
      [](std::size_t n, std::vector<std::size_t> marked, const std::string& method, std::uint64_t seed) {
        RandomSource rng(seed);
        const SearchResult r = run_search(make_instance(n, std::move(marked)), parse_search_method(method), rng);
        py::dict d;
        d["method"] = r.method;
        d["found"] = r.found;
        d["success"] = r.success;
        d["queries"] = r.queries;
        d["iterations"] = r.iterations;
        d["success_probability"] = r.success_probability;
        d["ledger"] = ledger_dict(r.ledger);
        return d;
      },
      py::arg("n"), py::arg("marked"), py::arg("method") = "standard", py::arg("seed") = 0);

  m.def(
      "prepare",
      [](const std::vector<double>& x, const std::string& method, double epsilon, std::uint64_t seed) {
        RandomSource rng(seed);
        PrepBenchOptions opts;
        opts.epsilon = epsilon;
        const PrepReport r = run_prep(ClassicalVector::from(x), parse_prep_method(method), rng, opts);
        py::dict d;
        d["method"] = r.method;
        d["output"] = r.output.amplitudes();
        d["fidelity"] = r.fidelity;
        d["success_probability"] = r.success_probability;
        d["expected_attempts"] = r.expected_attempts;
        d["attempts"] = r.attempts;
        d["kappa"] = r.kappa;
        d["q"] = r.q;
        d["ledger"] = ledger_dict(r.ledger);
        d["bound_ratio"] = r.bound_ratio ? py::cast(*r.bound_ratio) : py::none();
        d["bound_holds"] = r.bound_holds ? py::cast(*r.bound_holds) : py::none();
        return d;
      },
      py::arg("x"), py::arg("method") = "thm2", py::arg("epsilon") = 1e-2, py::arg("seed") = 0);
  m.def(
      "decompose_bins",
      [](const std::vector<double>& x) {
        const BinDecomposition b = decompose_bins(ClassicalVector::from(x));
        return py::make_tuple(b.q, b.bins, b.lambdas);
      },
      py::arg("x"));
  m.def(
      "sign_shift",
      [](const std::vector<double>& x) {
        const SignShift s = sign_shift(ClassicalVector::from(x));
        std::vector<double> z(s.z_hi.size());
        for (std::size_t i = 0; i < z.size(); ++i) z[i] = s.z_hi[i] + s.z_lo[i];
        return py::make_tuple(s.y, z, s.bound_ratio());
      },
      py::arg("x"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = cli_main(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
