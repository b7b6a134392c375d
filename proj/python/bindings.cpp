#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wright_poisson/checks.hpp"
#include "wright_poisson/distribution.hpp"
#include "wright_poisson/errors.hpp"
#include "wright_poisson/estimation.hpp"
#include "wright_poisson/special_functions.hpp"

namespace py = pybind11;
using namespace wright_poisson;

namespace {

std::vector<GammaArg> to_args(const std::vector<std::pair<double, double>>& pairs) {
  std::vector<GammaArg> out;
  for (const auto& [shift, weight] : pairs) out.push_back({shift, weight});
  return out;
}

}  // namespace

PYBIND11_MODULE(_wright_poisson, m) {
  m.doc() = "Wright-type Poisson distribution and Mittag-Leffler / Wright series.";

  auto domain = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<NonConvergenceError>(m, "NonConvergenceError", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", domain.ptr());
  py::register_exception<DegenerateDataError>(m, "DegenerateDataError", PyExc_ValueError);

  py::class_<SeriesControl>(m, "SeriesControl")
      .def(py::init([](double rel_tol, int min_terms, int max_terms, int consecutive_small) {
             SeriesControl c{rel_tol, min_terms, max_terms, consecutive_small};
             c.validate();
             return c;
           }),
           py::arg("rel_tol") = 1e-15, py::arg("min_terms") = 8, py::arg("max_terms") = 10000,
           py::arg("consecutive_small") = 3)
      .def_readwrite("rel_tol", &SeriesControl::rel_tol)
      .def_readwrite("min_terms", &SeriesControl::min_terms)
      .def_readwrite("max_terms", &SeriesControl::max_terms)
      .def_readwrite("consecutive_small", &SeriesControl::consecutive_small);

  py::class_<SeriesResult>(m, "SeriesResult")
      .def_readonly("value", &SeriesResult::value)
      .def_readonly("log_value", &SeriesResult::log_value)
      .def_readonly("terms_used", &SeriesResult::terms_used)
      .def_readonly("converged", &SeriesResult::converged)
      .def_readonly("scaled_value", &SeriesResult::scaled_value)
      .def_readonly("log_scale", &SeriesResult::log_scale)
      .def_readonly("warning", &SeriesResult::warning)
      .def("__float__", [](const SeriesResult& r) { return r.value; })
      .def("__repr__", [](const SeriesResult& r) {
        return "SeriesResult(value=" + py::repr(py::float_(r.value)).cast<std::string>() +
               ", terms_used=" + std::to_string(r.terms_used) + ")";
      });

  m.def("log_gamma", &log_gamma, py::arg("x"));
  m.def("reciprocal_gamma", &reciprocal_gamma, py::arg("x"));
  m.def("pochhammer", &pochhammer, py::arg("gamma"), py::arg("n"));
  m.def(
      "wright_series",
      [](const std::vector<std::pair<double, double>>& upper,
         const std::vector<std::pair<double, double>>& lower, double z, const SeriesControl& ctrl) {
        return wright_series(WrightSpec{to_args(upper), to_args(lower), z}, ctrl);
      },
      py::arg("upper"), py::arg("lower"), py::arg("z"), py::arg("ctrl") = SeriesControl{},
      "Generalized Wright series; upper and lower are lists of (shift, weight) pairs.");
  m.def("mittag_leffler", &mittag_leffler, py::arg("alpha"), py::arg("z"),
        py::arg("ctrl") = SeriesControl{});
  m.def("mittag_leffler2", &mittag_leffler2, py::arg("alpha"), py::arg("beta"), py::arg("z"),
        py::arg("ctrl") = SeriesControl{});
  m.def("mittag_leffler3", &mittag_leffler3, py::arg("alpha"), py::arg("beta"), py::arg("gamma"),
        py::arg("z"), py::arg("ctrl") = SeriesControl{});

  py::class_<MomentReport>(m, "MomentReport")
      .def_readonly("mean_series", &MomentReport::mean_series)
      .def_readonly("mean_closed_i", &MomentReport::mean_closed_i)
      .def_readonly("mean_closed_ii", &MomentReport::mean_closed_ii)
      .def_readonly("m2_series", &MomentReport::m2_series)
      .def_readonly("m2_closed_i", &MomentReport::m2_closed_i)
      .def_readonly("m2_closed_ii", &MomentReport::m2_closed_ii)
      .def_readonly("variance", &MomentReport::variance)
      .def_readonly("max_method_spread", &MomentReport::max_method_spread)
      .def_readonly("consistent", &MomentReport::consistent);

  py::class_<WrightPoisson>(m, "WrightPoisson")
      .def(py::init<double, double, double, SeriesControl>(), py::arg("alpha"), py::arg("beta"),
           py::arg("m"), py::arg("ctrl") = SeriesControl{})
      .def_property_readonly("alpha", &WrightPoisson::alpha)
      .def_property_readonly("beta", &WrightPoisson::beta)
      .def_property_readonly("m", &WrightPoisson::m)
      .def_property_readonly("log_normalizer", &WrightPoisson::log_normalizer)
      .def("log_pmf", &WrightPoisson::log_pmf, py::arg("r"))
      .def("pmf", &WrightPoisson::pmf, py::arg("r"))
      .def("cdf", &WrightPoisson::cdf, py::arg("r"))
      .def("quantile", &WrightPoisson::quantile, py::arg("p"))
      .def("mass_cutoff", &WrightPoisson::mass_cutoff)
      .def("mean", &WrightPoisson::mean_series)
      .def("second_moment", &WrightPoisson::second_moment_series)
      .def("moment_report", &WrightPoisson::moment_report)
      .def("mgf", &WrightPoisson::mgf, py::arg("t"))
      .def(
          "sample",
          [](const WrightPoisson& d, std::size_t n, std::uint64_t seed) {
            py::gil_scoped_release release;
            return d.sample(n, seed).values;
          },
          py::arg("n"), py::arg("seed"))
      .def("__repr__", [](const WrightPoisson& d) {
        return "WrightPoisson(alpha=" + py::repr(py::float_(d.alpha())).cast<std::string>() +
               ", beta=" + py::repr(py::float_(d.beta())).cast<std::string>() +
               ", m=" + py::repr(py::float_(d.m())).cast<std::string>() + ")";
      });

  py::class_<CountData>(m, "CountData")
      .def(py::init(&CountData::from_counts), py::arg("counts"))
      .def_readonly("counts", &CountData::counts)
      .def_readonly("n", &CountData::n)
      .def_readonly("sum", &CountData::sum)
      .def_readonly("sum_sq", &CountData::sum_sq)
      .def("mean", &CountData::mean);
  m.def("parse_counts", &parse_counts, py::arg("text"), py::arg("column") = py::none());
  m.def("load_counts", &load_counts, py::arg("path"), py::arg("column") = py::none());
  m.def("log_likelihood", &log_likelihood, py::arg("data"), py::arg("alpha"), py::arg("beta"),
        py::arg("m"), py::arg("ctrl") = SeriesControl{});

  py::enum_<FitProfile>(m, "FitProfile")
      .value("m_only", FitProfile::m_only)
      .value("full", FitProfile::full);

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("alpha", &FitResult::alpha)
      .def_readonly("beta", &FitResult::beta)
      .def_readonly("m", &FitResult::m)
      .def_readonly("log_likelihood", &FitResult::log_likelihood)
      .def_readonly("iterations", &FitResult::iterations)
      .def_readonly("converged", &FitResult::converged)
      .def_readonly("at_boundary", &FitResult::at_boundary)
      .def_readonly("profile", &FitResult::profile);

  m.def(
      "fit_m",
      [](const CountData& data, double alpha, double beta, const SeriesControl& ctrl) {
        py::gil_scoped_release release;
        return fit_m(data, alpha, beta, ctrl);
      },
      py::arg("data"), py::arg("alpha"), py::arg("beta"), py::arg("ctrl") = SeriesControl{});
  m.def(
      "fit_full",
      [](const CountData& data, const SeriesControl& ctrl) {
        py::gil_scoped_release release;
        return fit_full(data, ctrl);
      },
      py::arg("data"), py::arg("ctrl") = SeriesControl{});

  py::class_<CheckRow>(m, "CheckRow")
      .def_readonly("name", &CheckRow::name)
      .def_readonly("passed", &CheckRow::passed)
      .def_readonly("max_error", &CheckRow::max_error)
      .def_readonly("threshold", &CheckRow::threshold)
      .def_readonly("worst_case", &CheckRow::worst_case);
  m.def(
      "run_checks",
      [](int grid_size, std::optional<double> tolerance) {
        CheckOptions opts;
        opts.grid_size = grid_size;
        opts.tolerance = tolerance;
        py::gil_scoped_release release;
        return run_checks(opts);
      },
      py::arg("grid_size") = 5, py::arg("tolerance") = py::none());
}
