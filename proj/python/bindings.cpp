#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wcf/cheating.hpp"
#include "wcf/cli.hpp"
#include "wcf/error.hpp"
#include "wcf/montecarlo.hpp"
#include "wcf/oracle.hpp"

namespace py = pybind11;
using namespace wcf;

namespace {

py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Outcome outcome_arg(int w) {
  if (w != 0 && w != 1) throw Error(ErrorKind::OutOfRange, "outcome must be 0 or 1");
  return outcome_from_int(w);
}

Strategy strategy_arg(const std::string& kind, Role role, int target) {
  if (kind == "honest") return Strategy::honest(role);
  if (kind == "cheat") return Strategy::optimal_cheat(role, outcome_arg(target));
  throw Error(ErrorKind::OutOfRange, "strategy must be 'honest' or 'cheat'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Analysis of two-message weak coin flipping protocols";

  py::register_exception<Error>(m, "WcfError", PyExc_ValueError);

  py::class_<Protocol>(m, "Protocol")
      .def_static("validate", &Protocol::validate, py::arg("dim_a"), py::arg("dim_b"), py::arg("psi"),
                  py::arg("e0"), py::arg("fairness_tolerance") = kDefaultFairnessTolerance)
      .def_static(
          "from_profile",
          [](std::vector<double> a, std::vector<double> b, double tol) {
            return Protocol::from_profile(DiagonalProfile::make(std::move(a), std::move(b)), tol);
          },
          py::arg("a"), py::arg("b"), py::arg("fairness_tolerance") = kDefaultFairnessTolerance)
      .def_static(
          "parse", [](const std::string& text, double tol) { return parse_protocol(text, tol); }, py::arg("text"),
          py::arg("fairness_tolerance") = kDefaultFairnessTolerance)
      .def_property_readonly("dim_a", &Protocol::dim_a)
      .def_property_readonly("dim_b", &Protocol::dim_b)
      .def_property_readonly("psi", [](const Protocol& p) { return p.psi().amplitudes; })
      .def_property_readonly("e0", [](const Protocol& p) { return p.e0(); })
      .def_property_readonly("rho", [](const Protocol& p) { return p.rho(); })
      .def_property_readonly("p0", &Protocol::p0)
      .def_property_readonly("p1", &Protocol::p1)
      .def_property_readonly("fair", &Protocol::fair)
      .def("serialize", [](const Protocol& p) { return serialize_protocol(p); })
      .def("serialize_explicit", [](const Protocol& p) { return serialize_explicit(p); })
      .def("__repr__", [](const Protocol& p) {
        std::ostringstream os;
        os << "<Protocol dA=" << p.dim_a() << " dB=" << p.dim_b() << " p0=" << p.p0() << ">";
        return os.str();
      });

  m.def("paper_pa", &paper_pa, py::arg("protocol"));
  m.def("paper_pb", &paper_pb, py::arg("protocol"));
  m.def("align", &align, py::arg("protocol"));
  m.def("is_aligned", &is_aligned, py::arg("protocol"));
  m.def(
      "diagonal_profile",
      [](const Protocol& p) {
        const DiagonalProfile d = diagonal_profile(p);
        return py::make_tuple(d.a(), d.b());
      },
      py::arg("protocol"));
  m.def(
      "holder_floor",
      [](std::vector<double> a, std::vector<double> b) {
        return holder_floor(DiagonalProfile::make(std::move(a), std::move(b)));
      },
      py::arg("a"), py::arg("b"));
  m.def(
      "preparer_max", [](const Protocol& p, int w) { return preparer_max(p, outcome_arg(w)).probability; },
      py::arg("protocol"), py::arg("target"));
  m.def(
      "receiver_max", [](const Protocol& p, int w) { return receiver_max(p, outcome_arg(w)).probability; },
      py::arg("protocol"), py::arg("target"));
  m.def(
      "frontier",
      [](double target, const std::string& family) { return frontier(target, frontier_family_from_string(family)); },
      py::arg("target"), py::arg("family") = "paper");
  m.def(
      "analyze", [](const Protocol& p) { return to_python(to_json(analyze(p))); }, py::arg("protocol"));

  m.def(
      "preparer_oracle",
      [](const Protocol& p, int w, int restarts, std::uint64_t seed) {
        return to_python(to_json(preparer_oracle(p, outcome_arg(w), restarts, seed)));
      },
      py::arg("protocol"), py::arg("target"), py::arg("restarts") = 8, py::arg("seed") = 1);
  m.def(
      "receiver_oracle",
      [](const Protocol& p, int w, int restarts, std::uint64_t seed) {
        return to_python(to_json(receiver_oracle(p, outcome_arg(w), restarts, seed)));
      },
      py::arg("protocol"), py::arg("target"), py::arg("restarts") = 8, py::arg("seed") = 1);
  m.def(
      "audit_labels", [](int samples, std::uint64_t seed) { return to_python(to_json(audit_labels(samples, seed))); },
      py::arg("samples") = 100, py::arg("seed") = 1);
  m.def(
      "search_fair_minimum",
      [](int dim, int restarts, std::uint64_t seed) {
        return to_python(to_json(search_fair_minimum(dim, restarts, seed)));
      },
      py::arg("dim") = 2, py::arg("restarts") = 200, py::arg("seed") = 1);
  m.def(
      "run_batch",
      [](const Protocol& p, const std::string& alice, const std::string& bob, std::int64_t rounds,
         std::uint64_t seed, int alice_target, int bob_target, const std::string& labeling) {
        return to_python(to_json(run_batch(p, strategy_arg(alice, Role::Preparer, alice_target),
                                           strategy_arg(bob, Role::Receiver, bob_target), rounds, seed,
                                           labeling_from_string(labeling))));
      },
      py::arg("protocol"), py::arg("alice") = "honest", py::arg("bob") = "honest", py::arg("rounds") = 100000,
      py::arg("seed") = 1, py::arg("alice_target") = 1, py::arg("bob_target") = 0, py::arg("labeling") = "printed");
  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
