#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <string>

#include "xirho/xirho.hpp"

namespace py = pybind11;
using namespace xirho;

namespace {

py::dict measure_dict(const MeasureResult& r) {
  py::dict d;
  d["xi"] = r.xi;
  d["rho"] = r.rho;
  d["method"] = std::string(method_name(r.method));
  d["err"] = r.err;
  return d;
}

MeasureResult run_measures(const std::string& spec_text, const std::string& method, int nodes, std::size_t n,
                           std::uint64_t seed) {
  const CopulaSpec spec = parse_spec(spec_text);
  if (method == "closed") return measures_closed(spec);
  if (method == "quad") return measures_quadrature(CopulaModel(spec), {nodes, 4});
  if (method == "mc") return measures_monte_carlo(CopulaModel(spec), n, seed);
  if (method == "auto") {
    return has_closed_form(spec) ? measures_closed(spec) : measures_quadrature(CopulaModel(spec), {nodes, 4});
  }
  throw Error(ErrorCode::ParseError, "unknown method '" + method + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Chatterjee's xi and Spearman's rho for bivariate copulas";

  py::register_exception<Error>(m, "XirhoError", PyExc_ValueError);

  py::class_<CopulaModel>(m, "Copula")
      .def(py::init([](const std::string& spec) { return CopulaModel(parse_spec(spec)); }), py::arg("spec"))
      .def_property_readonly("spec", [](const CopulaModel& c) { return c.spec().to_string(); })
      .def("cdf", &CopulaModel::cdf, py::arg("u"), py::arg("v"))
      .def("d1", &CopulaModel::d1, py::arg("t"), py::arg("v"))
      .def("conditional_quantile", &CopulaModel::conditional_quantile, py::arg("t"), py::arg("w"))
      .def("__repr__", [](const CopulaModel& c) { return "Copula('" + c.spec().to_string() + "')"; });

  m.def(
      "measures",
      [](const std::string& spec, const std::string& method, int nodes, std::size_t n, std::uint64_t seed) {
        return measure_dict(run_measures(spec, method, nodes, n, seed));
      },
      py::arg("spec"), py::arg("method") = "auto", py::arg("nodes") = 64, py::arg("n") = 100000,
      py::arg("seed") = 1, "xi and rho as a dict with keys xi, rho, method, err.");

  m.def("xi_closed_cb", &xi_closed_cb, py::arg("b"));
  m.def("rho_closed_cb", &rho_closed_cb, py::arg("b"));
  m.def("b_of_x", &b_of_x, py::arg("x"));
  m.def("M_of_x", &M_of_x, py::arg("x"));

  m.def(
      "classify",
      [](double xi, double rho, double tol) { return std::string(classification_name(classify(xi, rho, tol).classification)); },
      py::arg("xi"), py::arg("rho"), py::arg("tol") = kClosedFormTol);

  m.def(
      "attain",
      [](double xi, double rho, double tol) {
        const auto r = attain(xi, rho, tol);
        py::dict d;
        d["b"] = r.b;
        d["p"] = r.p;
        d["xi"] = r.achieved.xi;
        d["rho"] = r.achieved.rho;
        return d;
      },
      py::arg("xi"), py::arg("rho"), py::arg("tol") = kQuadratureTol);

  m.def(
      "boundary_table",
      [](int k) {
        py::list rows;
        for (const auto& r : boundary_table(k)) {
          rows.append(py::make_tuple(r.x, r.m, r.b ? py::float_(*r.b) : py::object(py::none())));
        }
        return rows;
      },
      py::arg("k"), "List of (x, M_x, b_x) with b_x None at the endpoints.");

  m.def(
      "sample",
      [](const std::string& spec, std::size_t n, std::uint64_t seed) {
        Sample s;
        {
          py::gil_scoped_release release;
          s = sample(CopulaModel(parse_spec(spec)), n, seed);
        }
        return py::make_tuple(s.x, s.y);
      },
      py::arg("spec"), py::arg("n"), py::arg("seed") = 1);

  m.def(
      "xi_n", [](std::vector<double> x, std::vector<double> y, std::uint64_t tie_seed) {
        return xi_n(Sample{std::move(x), std::move(y)}, tie_seed);
      },
      py::arg("x"), py::arg("y"), py::arg("tie_seed") = 0);
  m.def(
      "rho_n", [](std::vector<double> x, std::vector<double> y) { return rho_n(Sample{std::move(x), std::move(y)}); },
      py::arg("x"), py::arg("y"));

  m.def(
      "oracle",
      [](double c, int grid, bool check) {
        const DiscreteProblem problem{grid, grid, c};
        OracleSolution sol;
        std::optional<ProjectedGradientResult> pg;
        {
          py::gil_scoped_release release;
          sol = solve(problem);
          if (check) pg = cross_check_projected_gradient(problem);
        }
        py::dict d;
        d["objective"] = sol.objective;
        d["xi"] = sol.xi;
        d["mu"] = sol.mu;
        d["slope"] = sol.common_slope;
        d["monotone_in_v"] = sol.monotone_in_v;
        if (pg) d["pg_objective"] = pg->objective;
        return d;
      },
      py::arg("c"), py::arg("grid") = 200, py::arg("check") = false);

  m.def(
      "gap_search",
      [](const std::string& family, int nodes) {
        static const std::map<std::string, Family> families = {
            {"cb", Family::Cb},         {"clayton", Family::Clayton}, {"frank", Family::Frank},
            {"gauss", Family::Gaussian}, {"gumbel", Family::Gumbel},   {"joe", Family::Joe}};
        const auto it = families.find(family);
        if (it == families.end()) throw Error(ErrorCode::UnknownFamily, "no gap search for '" + family + "'");
        const Family f = it->second;
        GapMaximum row;
        {
          py::gil_scoped_release release;
          row = table1_search(f, default_gap_grid(f), nodes, 1e-6);
        }
        py::dict d;
        d["param"] = row.param;
        d["rho"] = row.rho;
        d["xi"] = row.xi;
        d["gap"] = row.gap;
        return d;
      },
      py::arg("family"), py::arg("nodes") = 64,
      "Gap-maximizing parameter of cb, clayton, frank, gauss, gumbel or joe.");
}
