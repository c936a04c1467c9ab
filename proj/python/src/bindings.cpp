#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "svamp/amplification_bounds.hpp"
#include "svamp/attack_lp.hpp"
#include "svamp/cli.hpp"
#include "svamp/error.hpp"
#include "svamp/protocol_sim.hpp"
#include "svamp/sv_source.hpp"

namespace py = pybind11;
using namespace svamp;

namespace {

py::tuple run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"svamp"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code;
  {
    py::gil_scoped_release release;
    code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  }
  return py::make_tuple(code, out.str(), err.str());
}

py::dict interval(const protocol::Interval& i) {
  py::dict d;
  d["estimate"] = i.estimate;
  d["lower"] = i.lower;
  d["upper"] = i.upper;
  return d;
}

}  // namespace

PYBIND11_MODULE(_svamp, m) {
  m.doc() = "Randomness amplification from SV sources: bounds, attack LP and protocol simulation";
  py::register_exception<precondition_error>(m, "PreconditionError", PyExc_ValueError);

  m.def("run_cli", &run_cli, py::arg("args"),
        "Run the command-line entry point in-process; returns (exit_code, stdout, stderr).");

  m.def("threshold_epsilon1", &bounds::threshold_epsilon1);
  m.def("threshold_ky_fan", py::overload_cast<>(&bounds::threshold_ky_fan));
  m.def("threshold_epsilon2", &attack::threshold_epsilon2, py::arg("m_exponent") = 1.99,
        py::arg("tolerance") = 1e-14);
  m.def("entropy_constant", &bounds::solve_entropy_constant, py::arg("tolerance") = 1e-14);
  m.def("binary_entropy", &bounds::binary_entropy);
  m.def("quantum_value", &bounds::quantum_value, py::arg("n"));
  m.def("log_delta_big", [](double eps, int r) { return bounds::log_delta_big(source::SvParameter(eps), r); },
        py::arg("epsilon"), py::arg("r_bits"));

  py::class_<bounds::BoundChainResult>(m, "BoundChain")
      .def_readonly("ratio_lower_bound", &bounds::BoundChainResult::ratio_lower_bound)
      .def_readonly("delta_true_upper", &bounds::BoundChainResult::delta_true_upper)
      .def_readonly("d_upper", &bounds::BoundChainResult::d_upper)
      .def_readonly("delta_big", &bounds::BoundChainResult::delta_big)
      .def_readonly("log_d_upper", &bounds::BoundChainResult::log_d_upper)
      .def_readonly("log_delta_big", &bounds::BoundChainResult::log_delta_big);
  m.def("bound_chain",
        [](double eps, int r, bool ky_fan) { return bounds::bound_chain(source::SvParameter(eps), r, ky_fan); },
        py::arg("epsilon"), py::arg("r_bits"), py::arg("ky_fan") = false);

  py::class_<attack::AttackParams>(m, "AttackParams")
      .def_readonly("m", &attack::AttackParams::m)
      .def_readonly("n", &attack::AttackParams::n)
      .def_readonly("a", &attack::AttackParams::a)
      .def_readonly("one_minus_a", &attack::AttackParams::one_minus_a)
      .def_readonly("c_plus", &attack::AttackParams::c_plus)
      .def_property_readonly("dual_precondition", &attack::AttackParams::dual_precondition);
  m.def("attack_params",
        [](double eps, int r, int m_runs, double m_exponent) {
          source::SvParameter sv(eps);
          return m_runs > 0 ? attack::attack_params_for_runs(sv, r, m_runs)
                            : attack::derive_attack_params(sv, r, m_exponent);
        },
        py::arg("epsilon"), py::arg("r_bits"), py::arg("m") = 0, py::arg("m_exponent") = 1.99);
  m.def("make_attack_params", &attack::make_attack_params, py::arg("m"), py::arg("n"), py::arg("a"),
        py::arg("c_plus"), py::arg("c_minus") = 0.0);

  py::class_<attack::ClosedForm>(m, "ClosedForm")
      .def_readonly("u", &attack::ClosedForm::u)
      .def_readonly("v", &attack::ClosedForm::v)
      .def_readonly("p_u", &attack::ClosedForm::p_u)
      .def_readonly("p_v", &attack::ClosedForm::p_v)
      .def_readonly("value", &attack::ClosedForm::value)
      .def_readonly("upper_bound", &attack::ClosedForm::upper_bound);
  m.def("closed_form_optimum", &attack::closed_form_optimum);
  m.def("simplex_value",
        [](const attack::AttackParams& p, bool lower_side) {
          const auto r = attack::solve_acceptance_lp(p, lower_side);
          return py::make_tuple(std::string(lp::to_string(r.solution.status)), r.solution.value,
                                r.solution.primal, r.solution.dual);
        },
        py::arg("params"), py::arg("lower_side") = false,
        "Returns (status, value, primal, dual) of the acceptance LP.");

  py::class_<attack::DualCertificate>(m, "DualCertificate")
      .def_readonly("y", &attack::DualCertificate::y)
      .def_readonly("objective", &attack::DualCertificate::objective)
      .def_readonly("slacks", &attack::DualCertificate::slacks)
      .def_readonly("min_slack", &attack::DualCertificate::min_slack)
      .def_readonly("feasible", &attack::DualCertificate::feasible);
  m.def("dual_certificate",
        [](const attack::AttackParams& p, const std::string& variant) {
          return attack::dual_certificate(p, attack::parse_dual_variant(variant));
        },
        py::arg("params"), py::arg("variant") = "two_point");
  m.def("acceptance_probability",
        [](const std::vector<double>& type_probs, std::int64_t n, double a) {
          return attack::acceptance_probability(attack::ensemble_from_type_probs(type_probs, n), a);
        },
        py::arg("type_probs"), py::arg("n"), py::arg("a"));

  m.def("simulate",
        [](int n, std::int64_t runs, double eps, const std::string& supplier, std::vector<double> attack_type_probs,
           std::uint64_t trials, std::uint64_t seed, int threads) {
          protocol::ProtocolConfig c;
          c.n = n;
          c.runs = runs;
          c.epsilon = eps;
          c.supplier = protocol::parse_supplier(supplier);
          c.attack_type_probs = std::move(attack_type_probs);
          c.seed = seed;
          protocol::SimulationSummary s;
          {
            py::gil_scoped_release release;
            s = protocol::simulate(c, trials, threads);
          }
          py::dict d;
          d["trials"] = s.trials;
          d["accepted"] = s.accepted;
          d["acceptance"] = interval(s.acceptance());
          d["acceptance_given_cardinality"] = interval(s.acceptance_given_cardinality());
          d["inconsistency_rate"] = interval(s.inconsistency_rate());
          d["bias"] = interval(s.bias());
          return d;
        },
        py::arg("n") = 8, py::arg("runs") = 0, py::arg("epsilon") = 0.0, py::arg("supplier") = "honest_quantum",
        py::arg("attack_type_probs") = std::vector<double>{}, py::arg("trials") = 1000, py::arg("seed") = 1,
        py::arg("threads") = 1);
}
