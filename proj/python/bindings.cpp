#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "holegaf/coeffs.hpp"
#include "holegaf/envelopes.hpp"
#include "holegaf/errors.hpp"
#include "holegaf/experiment.hpp"
#include "holegaf/gaf.hpp"
#include "holegaf/holes.hpp"
#include "holegaf/oracles.hpp"
#include "holegaf/spectra.hpp"

namespace py = pybind11;
using namespace holegaf;

namespace {

py::dict estimate_dict(const HoleEstimate& e) {
  py::dict d;
  d["mode"] = to_string(e.mode);
  d["r"] = e.r;
  d["trials"] = e.trials;
  d["hits"] = e.hits;
  d["inconclusive"] = e.inconclusive;
  d["p_low"] = e.p_low;
  d["p_high"] = e.p_high;
  d["confidence"] = e.confidence;
  d["seed"] = e.seed;
  d["N_t"] = e.N_t;
  if (e.M) d["M"] = *e.M;
  d["extra"] = e.extra;
  return d;
}

EstimatorOptions options(unsigned threads) {
  EstimatorOptions o;
  o.threads = threads;
  return o;
}

}  // namespace

PYBIND11_MODULE(_holegaf, m) {
  m.doc() = "Hole probabilities of Gaussian analytic functions";

  static py::exception<Error> err(m, "HolegafError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object kind = py::str(to_string(e.kind()));
      err.attr("kind") = kind;
      PyErr_SetString(err.ptr(), e.what());
    }
  });

  py::class_<CoefficientModel>(m, "Model")
      .def_static("hyperbolic", &CoefficientModel::hyperbolic, py::arg("L"))
      .def_static("power_law", &CoefficientModel::power_law, py::arg("L"))
      .def_static("constant_unit", &CoefficientModel::constant_unit)
      .def_static("explicit", &CoefficientModel::explicit_sequence, py::arg("seq"))
      .def("__repr__", &CoefficientModel::describe);

  m.def("coefficient", &coefficient, py::arg("model"), py::arg("n"));
  m.def("coefficient_table", &coefficient_table, py::arg("model"), py::arg("count"));
  m.def("sigma_sq", &sigma_sq, py::arg("model"), py::arg("r"));
  m.def("sigma_sq_series", &sigma_sq_series, py::arg("model"), py::arg("r"), py::arg("rel_tail") = 1e-14);
  m.def("s_planar", &s_planar, py::arg("model"), py::arg("r"));

  m.def("truncation_degree", [](const CoefficientModel& model, double rho, double tau_rel) {
    return truncation_degree(model, rho, tau_rel);
  }, py::arg("model"), py::arg("rho"), py::arg("tau_rel") = kDefaultTauRel);
  m.def("sample", [](const CoefficientModel& model, std::uint64_t seed, std::uint64_t stream, std::uint64_t degree) {
    return sample(model, seed, stream, degree).coeffs;
  }, py::arg("model"), py::arg("seed"), py::arg("stream"), py::arg("degree"));

  m.def("circulant_eigenvalues", [](const CoefficientModel& model, double r, std::uint64_t N) {
    return circulant_eigenvalues(model, r, N).lambdas;
  }, py::arg("model"), py::arg("r"), py::arg("N"));
  m.def("covariance_matrix", &covariance_matrix, py::arg("model"), py::arg("r"), py::arg("N"));

  m.def("estimate_direct", [](const CoefficientModel& model, double r, std::uint64_t trials, std::uint64_t seed,
                              double confidence, unsigned threads) {
    return estimate_dict(estimate_hole_direct(model, r, trials, seed, confidence, options(threads)));
  }, py::arg("model"), py::arg("r"), py::arg("trials"), py::arg("seed") = 1, py::arg("confidence") = 0.99,
        py::arg("threads") = 0);
  m.def("estimate_threshold", [](const CoefficientModel& model, double r, double M, std::uint64_t trials,
                                 std::uint64_t seed, double confidence, unsigned threads) {
    return estimate_dict(estimate_hole_lower_threshold(model, r, M, trials, seed, confidence, options(threads)));
  }, py::arg("model"), py::arg("r"), py::arg("M"), py::arg("trials"), py::arg("seed") = 1,
        py::arg("confidence") = 0.99, py::arg("threads") = 0);
  m.def("estimate_tilted", [](const CoefficientModel& model, double r, std::uint64_t trials, std::uint64_t seed,
                              double alpha, double confidence, unsigned threads) {
    return estimate_dict(
        tilted_lower_estimator(model, r, alpha, std::nullopt, trials, seed, confidence, options(threads)));
  }, py::arg("model"), py::arg("r"), py::arg("trials"), py::arg("seed") = 1, py::arg("alpha") = 0.75,
        py::arg("confidence") = 0.99, py::arg("threads") = 0);
  m.def("default_threshold", [](double L, double r) { return default_threshold(L, r); }, py::arg("L"), py::arg("r"));
  m.def("determinantal_oracle", &determinantal_oracle, py::arg("r"));

  m.def("exp_integral_e1", &exp_integral_e1, py::arg("x"));
  m.def("neg_moment_exact", &neg_moment_exact, py::arg("theta"));
  m.def("neg_moment_quadrature", &neg_moment_quadrature, py::arg("theta"), py::arg("t"), py::arg("w"));
  m.def("lemma6_defect", &lemma6_defect, py::arg("coeffs"), py::arg("k"));

  m.def("envelope", [](double L, double r) {
    auto e = theorem1_envelope(L, r);
    py::dict d;
    d["lower"] = e.lower;
    d["upper"] = e.upper;
    d["regime"] = to_string(e.regime);
    return d;
  }, py::arg("L"), py::arg("r"));
  m.def("chebyshev_certificate", [](double L, double r) { return chebyshev_certificate(L, r); }, py::arg("L"),
        py::arg("r"));

  m.def("verify", [](bool full) {
    auto o = cli::verify_suite(full ? cli::VerifyLevel::Full : cli::VerifyLevel::Quick);
    return py::make_tuple(o.pass, cli::format_verify_table(o));
  }, py::arg("full") = false);
}
