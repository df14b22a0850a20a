#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nwidth/bodies.hpp"
#include "nwidth/cli.hpp"
#include "nwidth/order.hpp"
#include "nwidth/suites.hpp"
#include "nwidth/widths.hpp"

namespace py = pybind11;
using namespace nwidth;

namespace {

// Exponents come in as floats; math.inf selects p = inf.
Exponent X(double p) { return Exponent(p); }

py::dict estimate_dict(const OrderEstimate& est) {
  py::dict d;
  d["value"] = est.value;
  d["case"] = to_string(est.case_id);
  d["regime"] = to_string(est.regime);
  py::list trace;
  for (const auto& s : est.trace)
    trace.append(py::make_tuple(s.side == BoundSide::Upper ? "upper" : "lower", to_string(s.tag)));
  d["trace"] = trace;
  d["derivation"] = describe_derivation(est);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Kolmogorov widths of intersections of l_p balls";
  py::register_exception<NotCovered>(m, "NotCovered", PyExc_ValueError);

  m.def("interpolation_lambda", [](double p1, double p0, double q) { return interpolation_lambda(X(p1), X(p0), X(q)); },
        py::arg("p1"), py::arg("p0"), py::arg("q"));
  m.def("lambda_pq", [](double p, double q) { return lambda_pq(X(p), X(q)); }, py::arg("p"), py::arg("q"));
  m.def("k_from_nu", [](double nu, double p1, double p0, int dim) { return k_from_nu(nu, X(p1), X(p0), dim); },
        py::arg("nu"), py::arg("p1"), py::arg("p0"), py::arg("m"));
  m.def("regime_boundary", [](double k, int dim, double q) { return regime_boundary(k, dim, X(q)); }, py::arg("k"),
        py::arg("m"), py::arg("q"));
  m.def("effective_k", [](long n, int dim, double q, double a) { return effective_k(n, dim, X(q), a); }, py::arg("n"),
        py::arg("m"), py::arg("q"), py::arg("a") = 1.0);

  m.def("order_ball", [](double p, double q, int dim, long n) { return order_ball(X(p), X(q), dim, n); }, py::arg("p"),
        py::arg("q"), py::arg("m"), py::arg("n"));
  m.def("width_exact", [](double p, double q, int dim, long n) { return width_exact(X(p), X(q), dim, n); },
        py::arg("p"), py::arg("q"), py::arg("m"), py::arg("n"));
  m.def(
      "order_intersection",
      [](double p0, double p1, double q, int dim, long n, std::optional<double> k, std::optional<double> nu) {
        if (k.has_value() == nu.has_value()) throw std::invalid_argument("give exactly one of k or nu");
        const ProblemParams pp = k ? ProblemParams::from_k(X(p0), X(p1), X(q), dim, n, *k)
                                   : ProblemParams::from_nu(X(p0), X(p1), X(q), dim, n, *nu);
        return estimate_dict(order_intersection(pp));
      },
      py::arg("p0"), py::arg("p1"), py::arg("q"), py::arg("m"), py::arg("n"), py::kw_only(), py::arg("k") = py::none(),
      py::arg("nu") = py::none());

  m.def("gauge", [](const std::string& body, const Vector& x) {
    return gauge(BodySpec::parse(body, static_cast<int>(x.size())), x);
  }, py::arg("body"), py::arg("x"));
  m.def("support", [](const std::string& body, const Vector& y) {
    const auto r = support(BodySpec::parse(body, static_cast<int>(y.size())), y);
    return py::make_tuple(r.value, r.point, r.approximate);
  }, py::arg("body"), py::arg("y"));
  m.def("vk_vertices", [](int dim, int k) {
    const auto vs = vk_vertices(dim, k);
    Eigen::MatrixXd out(static_cast<Eigen::Index>(vs.size()), dim);
    for (std::size_t i = 0; i < vs.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = vs[i].transpose();
    return out;
  }, py::arg("m"), py::arg("k"));

  m.def("dist_to_subspace", [](const Vector& x, const Eigen::MatrixXd& columns, double q) {
    return dist_to_subspace(x, Subspace::from_columns(columns), X(q));
  }, py::arg("x"), py::arg("columns"), py::arg("q"));
  m.def("pca_lower_l2", &pca_lower_l2, py::arg("m"), py::arg("k"), py::arg("n"), py::arg("cap") = kDefaultVertexCap);
  m.def("transfer_lower", [](double q, int dim, double lower2) { return transfer_lower(X(q), dim, lower2); },
        py::arg("q"), py::arg("m"), py::arg("lower2"));
  m.def(
      "width_bounds",
      [](const std::string& body, int dim, long n, double q, std::uint64_t seed, int restarts, int threads) {
        SearchConfig cfg;
        cfg.seed = seed;
        cfg.restarts = restarts;
        cfg.threads = threads;
        WidthBounds wb;
        {
          py::gil_scoped_release release;
          wb = width_bounds(BodySpec::parse(body, dim), n, X(q), cfg);
        }
        py::dict d;
        d["upper"] = wb.upper;
        d["lower"] = wb.lower;
        d["lower_method"] = to_string(wb.lower_method);
        d["upper_heuristic"] = wb.upper_heuristic;
        d["basis"] = wb.upper_certificate.basis();
        return d;
      },
      py::arg("body"), py::arg("m"), py::arg("n"), py::arg("q"), py::arg("seed") = 0, py::arg("restarts") = 8,
      py::arg("threads") = 1);

  m.def("verify", [](const std::string& suite, long samples, std::uint64_t seed) {
    py::list out;
    for (const auto& r : run_suite(suite, samples, seed)) {
      py::dict d;
      d["name"] = r.name;
      d["params"] = r.params;
      d["checks"] = r.checks;
      d["violations"] = r.violations;
      d["max_deviation"] = r.max_deviation;
      d["passed"] = r.passed();
      out.append(d);
    }
    return out;
  }, py::arg("suite"), py::arg("samples") = 1000, py::arg("seed") = 0);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));
}
