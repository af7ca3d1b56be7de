#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "qmoments/bounds.hpp"
#include "qmoments/errors.hpp"
#include "qmoments/io.hpp"
#include "qmoments/momentmatch.hpp"
#include "qmoments/quadrature.hpp"
#include "qmoments/rootfind.hpp"

namespace py = pybind11;

namespace {

qmoments::CoefficientSet solve_spec(const qmoments::BaseSpec& spec) {
  return spec.uniform()
             ? qmoments::coefficients(spec.bases.front(), spec.n(), 0)
             : qmoments::mixed_base_solve(spec, 0);
}

py::dict to_dict(const qmoments::CoefficientSet& cs) {
  std::vector<double> a, r, b, radius;
  for (const auto& x : cs.a) {
    a.push_back(x.midpoint_double());
    radius.push_back(x.radius_double());
  }
  for (const auto& x : cs.r) r.push_back(x.midpoint_double());
  for (const auto& x : cs.b) b.push_back(x.midpoint_double());
  py::dict d;
  d["bases"] = cs.spec.bases;
  d["a"] = a;
  d["r"] = r;
  d["b"] = b;
  d["radius"] = radius;
  d["method"] = cs.method == qmoments::SolveMethod::polynomial_roots ? "polynomial_roots"
                                                                     : "newton_mixed";
  d["converged"] = cs.converged;
  return d;
}

py::dict to_dict(const qmoments::VerifyReport& report) {
  py::list checks;
  for (const auto& check : report.checks) {
    py::dict c;
    c["name"] = check.name;
    c["pass"] = check.pass;
    c["detail"] = check.detail;
    checks.append(std::move(c));
  }
  py::dict d;
  d["bases"] = report.spec.bases;
  d["checks"] = std::move(checks);
  d["all_pass"] = report.all_pass();
  return d;
}

py::dict nodes_dict(const qmoments::BaseSpec& spec) {
  const auto cs = solve_spec(spec);
  if (!cs.converged) {
    throw qmoments::precision_error("solution could not be certified at the working precision");
  }
  const auto qf = qmoments::enumerate_nodes(cs);
  std::vector<double> nodes, radius;
  for (const auto& node : qf.nodes) {
    nodes.push_back(node.midpoint_double());
    radius.push_back(node.radius_double());
  }
  py::dict d;
  d["bases"] = qf.spec.bases;
  d["count"] = qf.count();
  d["weight"] = qf.weight.get_d();
  d["degree"] = qf.degree;
  d["nodes"] = nodes;
  d["radius"] = radius;
  return d;
}

std::string figure_for(const qmoments::BaseSpec& spec, const std::string& format) {
  const auto cs = solve_spec(spec);
  if (!cs.converged) {
    throw qmoments::precision_error("solution could not be certified at the working precision");
  }
  const auto qf = qmoments::enumerate_nodes(cs);
  if (format == "svg") return qmoments::emit_figure(qf, qmoments::FigureFormat::svg);
  if (format == "text") return qmoments::emit_figure(qf, qmoments::FigureFormat::text);
  throw qmoments::domain_error("figure format must be 'text' or 'svg'");
}

}  // namespace

PYBIND11_MODULE(_qmoments, m) {
  m.doc() =
      "Equal-weight quadrature on [-1, 1] built from sums of scaled discrete "
      "uniform variables, with certified interval arithmetic underneath.";
  m.attr("__version__") = "1.0.0";

  py::register_exception<qmoments::error>(m, "QmomentsError");

  m.def("set_precision", [](long bits) { qmoments::set_default_precision(bits); },
        py::arg("bits"), "Set the default working precision in bits.");
  m.def("get_precision", []() { return static_cast<long>(qmoments::default_precision()); },
        "Current default working precision in bits.");

  m.def("coefficients",
        [](long p, int n) { return to_dict(qmoments::coefficients(p, n, 0)); },
        py::arg("p"), py::arg("n"),
        "Scaling coefficients for n variables over the uniform base p.");
  m.def("coefficients",
        [](const std::vector<long>& bases) {
          return to_dict(solve_spec(qmoments::BaseSpec(bases)));
        },
        py::arg("bases"), "Scaling coefficients for one base per variable.");

  m.def("roots",
        [](long p, int n) {
          std::vector<double> out;
          for (const auto& root : qmoments::roots_all(p, n, 0)) {
            out.push_back(root.value.midpoint_double());
          }
          return out;
        },
        py::arg("p"), py::arg("n"),
        "Roots of the degree-n truncated q-exponential, q = p*p, ascending.");

  m.def("nodes", [](long p, int n) { return nodes_dict(qmoments::BaseSpec(p, n)); },
        py::arg("p"), py::arg("n"), "Quadrature nodes, weight, and exactness degree.");
  m.def("nodes",
        [](const std::vector<long>& bases) { return nodes_dict(qmoments::BaseSpec(bases)); },
        py::arg("bases"), "Quadrature nodes for one base per variable.");

  m.def("verify",
        [](long p, int n) { return to_dict(qmoments::run_verification(qmoments::BaseSpec(p, n))); },
        py::arg("p"), py::arg("n"), "Run the certified verification battery.");
  m.def("verify",
        [](const std::vector<long>& bases) {
          return to_dict(qmoments::run_verification(qmoments::BaseSpec(bases)));
        },
        py::arg("bases"), "Run the certified verification battery for mixed bases.");

  m.def("figure",
        [](long p, int n, const std::string& format) {
          return figure_for(qmoments::BaseSpec(p, n), format);
        },
        py::arg("p"), py::arg("n"), py::arg("format") = "text",
        "Ruler figure as a text or SVG document.");
  m.def("figure",
        [](const std::vector<long>& bases, const std::string& format) {
          return figure_for(qmoments::BaseSpec(bases), format);
        },
        py::arg("bases"), py::arg("format") = "text",
        "Ruler figure for mixed bases.");

  m.def("coeffs_json",
        [](const std::vector<long>& bases, int digits) {
          return qmoments::coeffs_json(solve_spec(qmoments::BaseSpec(bases)), digits);
        },
        py::arg("bases"), py::arg("digits") = 50,
        "Coefficient set as a JSON document with certified decimal strings.");
  m.def("nodes_json",
        [](const std::vector<long>& bases, int digits) {
          const auto cs = solve_spec(qmoments::BaseSpec(bases));
          if (!cs.converged) {
            throw qmoments::precision_error(
                "solution could not be certified at the working precision");
          }
          return qmoments::nodes_json(qmoments::enumerate_nodes(cs), digits);
        },
        py::arg("bases"), py::arg("digits") = 50,
        "Node list as a JSON document with certified decimal strings.");

  m.def("h_hat",
        [](long q, int k) {
          return qmoments::h_hat(qmoments::BigRational(q), k).get_d();
        },
        py::arg("q"), py::arg("k"), "Closed-form lower proxy for the root-existence quantity.");
}
