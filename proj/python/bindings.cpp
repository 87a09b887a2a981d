#include "nlspec/errors.hpp"
#include "nlspec/heat_kernel.hpp"
#include "nlspec/inverse.hpp"
#include "nlspec/spectra.hpp"
#include "nlspec/trace.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace nlspec;

namespace {

BoundaryCondition bc_from(const std::string& s) { return parse_boundary_condition(s); }

FitOptions fit_options(std::optional<double> t_min, std::optional<double> t_max, int samples) {
  FitOptions o;
  o.t_min = t_min;
  o.t_max = t_max;
  o.samples = samples;
  return o;
}

}  // namespace

PYBIND11_MODULE(_nlspec, m) {
  m.attr("__version__") = NLSPEC_VERSION;

  static py::handle error_type = py::exception<Error>(m, "Error").release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
      exc.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  py::class_<LameParameters>(m, "LameParameters")
      .def(py::init([](double mu, double lambda) {
             LameParameters p{mu, lambda};
             p.validate();
             return p;
           }),
           py::arg("mu") = 1.0, py::arg("lam") = 0.0)
      .def_readonly("mu", &LameParameters::mu)
      .def_readonly("lam", &LameParameters::lambda)
      .def("pressure_modulus", &LameParameters::pressure_modulus)
      .def("__repr__", [](const LameParameters& p) {
        return "LameParameters(mu=" + std::to_string(p.mu) + ", lam=" + std::to_string(p.lambda) + ")";
      });

  py::class_<CoefficientPrediction>(m, "CoefficientPrediction")
      .def_readonly("a0", &CoefficientPrediction::a0)
      .def_readonly("a1", &CoefficientPrediction::a1)
      .def_readonly("n", &CoefficientPrediction::n)
      .def_readonly("vol", &CoefficientPrediction::vol)
      .def_readonly("boundary_vol", &CoefficientPrediction::boundary_vol)
      .def("model", &CoefficientPrediction::model, py::arg("t"), py::arg("bc_sign"));

  m.def("predict_coefficients", &predict_coefficients, py::arg("n"), py::arg("params"), py::arg("vol"),
        py::arg("boundary_vol"));
  m.def("residue_heat_symbol", &residue_heat_symbol, py::arg("n"), py::arg("params"), py::arg("q"), py::arg("t"));
  m.def("contour_heat_symbol", &contour_heat_symbol, py::arg("n"), py::arg("params"), py::arg("q"), py::arg("t"),
        py::arg("nodes") = 4096);
  m.def("interior_density", &interior_density, py::arg("n"), py::arg("params"), py::arg("t"));
  m.def("boundary_density", &boundary_density, py::arg("n"), py::arg("params"), py::arg("t"));
  m.def("weyl_coefficient", &weyl_coefficient, py::arg("n"), py::arg("params"), py::arg("vol"));

  py::class_<Spectrum>(m, "Spectrum")
      .def_readonly("eigenvalues", &Spectrum::eigenvalues)
      .def_readonly("multiplicities", &Spectrum::multiplicities)
      .def_readonly("params", &Spectrum::params)
      .def_readonly("grid", &Spectrum::grid)
      .def_property_readonly("bc", [](const Spectrum& s) { return to_string(s.bc); })
      .def_property_readonly("method", [](const Spectrum& s) { return to_string(s.method); })
      .def_property_readonly("domain", [](const Spectrum& s) { return s.domain.describe(); })
      .def_property_readonly("dim", &Spectrum::dim)
      .def("count", &Spectrum::count)
      .def("resolved_ceiling", &Spectrum::resolved_ceiling)
      .def("expanded", &Spectrum::expanded)
      .def("__len__", [](const Spectrum& s) { return s.eigenvalues.size(); });

  m.def(
      "interval_spectrum",
      [](double length, const LameParameters& p, const std::string& bc, int count) {
        return interval_spectrum(length, p, bc_from(bc), count);
      },
      py::arg("length"), py::arg("params"), py::arg("bc"), py::arg("count"));
  m.def(
      "disk_spectrum",
      [](double radius, const LameParameters& p, int m_max, int k_max) {
        py::gil_scoped_release release;
        return disk_spectrum(radius, p, m_max, k_max);
      },
      py::arg("radius"), py::arg("params"), py::arg("m_max"), py::arg("k_max"));
  m.def(
      "rectangle_fd_spectrum",
      [](double a, double b, const LameParameters& p, const std::string& bc, int grid_n, int threads) {
        py::gil_scoped_release release;
        FdOptions opts;
        opts.threads = threads;
        return rectangle_fd_spectrum(a, b, p, bc_from(bc), grid_n, opts);
      },
      py::arg("a"), py::arg("b"), py::arg("params"), py::arg("bc"), py::arg("grid_n"), py::arg("threads") = 1);

  py::class_<HeatTraceSample>(m, "HeatTraceSample")
      .def_readonly("t", &HeatTraceSample::t)
      .def_readonly("value", &HeatTraceSample::value)
      .def_readonly("truncation_bound", &HeatTraceSample::truncation_bound);
  m.def("heat_trace", &heat_trace, py::arg("spectrum"), py::arg("t"));
  m.def("counting_function", &counting_function, py::arg("spectrum"), py::arg("eta"));
  m.def("weyl_check", &weyl_check, py::arg("spectrum"));
  m.attr("TRUNCATION_TOLERANCE") = kTruncationTolerance;

  py::class_<CoefficientFit>(m, "CoefficientFit")
      .def_readonly("a0_hat", &CoefficientFit::a0_hat)
      .def_readonly("a1_hat", &CoefficientFit::a1_hat)
      .def_readonly("sign", &CoefficientFit::sign)
      .def_readonly("nuisance", &CoefficientFit::nuisance)
      .def_readonly("residual_norm", &CoefficientFit::residual_norm)
      .def_readonly("condition", &CoefficientFit::condition)
      .def_readonly("n", &CoefficientFit::n)
      .def_readonly("prediction", &CoefficientFit::prediction)
      .def_property_readonly("t_window",
                             [](const CoefficientFit& f) { return py::make_tuple(f.t_window.t_min, f.t_window.t_max); });
  m.def(
      "fit_spectrum",
      [](const Spectrum& s, std::optional<double> t_min, std::optional<double> t_max, int samples) {
        return fit_spectrum(s, fit_options(t_min, t_max, samples));
      },
      py::arg("spectrum"), py::arg("t_min") = py::none(), py::arg("t_max") = py::none(), py::arg("samples") = 32);

  py::class_<GeometryEstimate>(m, "GeometryEstimate")
      .def_readonly("vol_hat", &GeometryEstimate::vol_hat)
      .def_readonly("boundary_vol_hat", &GeometryEstimate::boundary_vol_hat)
      .def_readonly("n", &GeometryEstimate::n)
      .def_readonly("bc_sign", &GeometryEstimate::bc_sign)
      .def_readonly("confidence", &GeometryEstimate::confidence);
  m.def(
      "estimate_geometry",
      [](const Spectrum& s, const LameParameters& p, int n, std::optional<double> t_min, std::optional<double> t_max,
         int samples) { return estimate_geometry(s, p, n, fit_options(t_min, t_max, samples)); },
      py::arg("spectrum"), py::arg("params"), py::arg("n"), py::arg("t_min") = py::none(),
      py::arg("t_max") = py::none(), py::arg("samples") = 32);

  py::class_<RigidityVerdict>(m, "RigidityVerdict")
      .def_readonly("ratio", &RigidityVerdict::ratio)
      .def_readonly("ball_ratio", &RigidityVerdict::ball_ratio)
      .def_readonly("margin", &RigidityVerdict::margin)
      .def_readonly("tolerance", &RigidityVerdict::tolerance)
      .def_readonly("warning", &RigidityVerdict::warning)
      .def_property_readonly("verdict", [](const RigidityVerdict& v) { return to_string(v.verdict); });
  m.def("ball_rigidity_verdict", &ball_rigidity_verdict, py::arg("estimate"),
        py::arg("tolerance") = kDefaultVerdictTolerance);
  m.def("ball_isoperimetric_ratio", &ball_isoperimetric_ratio, py::arg("n"));
}
