#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hofa/check_suite.h"
#include "hofa/cli.h"
#include "hofa/distribution.h"
#include "hofa/error.h"
#include "hofa/function.h"
#include "hofa/gowers.h"
#include "hofa/parallel.h"
#include "hofa/polynomial.h"
#include "hofa/property.h"
#include "hofa/tester.h"
#include "hofa/version.h"

namespace py = pybind11;
using namespace hofa;

namespace {

FiniteFunction make_finite(int p, int n, int alphabet, std::vector<int> values) {
  std::vector<std::uint8_t> v(values.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (values[i] < 0 || values[i] >= alphabet) throw py::value_error("value outside [0, alphabet)");
    v[i] = static_cast<std::uint8_t>(values[i]);
  }
  return FiniteFunction::finite(FieldParams(p, n), alphabet, std::move(v));
}

py::dict distribution_dict(const RestrictionDistribution& d) {
  py::dict probs;
  for (const auto& [key, prob] : d.probs) probs[py::int_(key)] = prob;
  py::dict out;
  out["p"] = d.p;
  out["k"] = d.k;
  out["exact"] = d.exact;
  out["samples"] = d.samples;
  out["probs"] = probs;
  return out;
}

RestrictionDistribution distribution_from(const py::dict& d) {
  RestrictionDistribution r;
  r.p = d["p"].cast<int>();
  r.k = d["k"].cast<int>();
  for (const auto& [key, prob] : d["probs"].cast<py::dict>()) {
    r.probs[key.cast<OutcomeKey>()] = prob.cast<double>();
  }
  return r;
}

}  // namespace

PYBIND11_MODULE(_hofa, m) {
  m.doc() = "Higher-order Fourier analysis over F_p^n and a distance tester for affine-invariant properties.";
  m.attr("__version__") = kVersion;

  static py::exception<Error> hofa_error(m, "HofaError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr ptr) {
    try {
      if (ptr) std::rethrow_exception(ptr);
    } catch (const Error& e) {
      hofa_error(e.what());
    }
  });

  py::class_<FiniteFunction>(m, "Function")
      .def_static("finite", &make_finite, py::arg("p"), py::arg("n"), py::arg("alphabet"), py::arg("values"))
      .def_static(
          "real",
          [](int p, int n, std::vector<double> values) { return FiniteFunction::real_auto(FieldParams(p, n), std::move(values)); },
          py::arg("p"), py::arg("n"), py::arg("values"))
      .def_static(
          "complex",
          [](int p, int n, std::vector<Complex> values) { return FiniteFunction::complex(FieldParams(p, n), std::move(values)); },
          py::arg("p"), py::arg("n"), py::arg("values"))
      .def_static(
          "parse", [](const std::string& text) {
            std::istringstream in(text);
            return parse_function(in, "<string>");
          },
          py::arg("text"))
      .def_property_readonly("p", [](const FiniteFunction& f) { return f.params().p(); })
      .def_property_readonly("n", [](const FiniteFunction& f) { return f.params().n(); })
      .def_property_readonly("kind", [](const FiniteFunction& f) { return range_kind_name(f.kind()); })
      .def_property_readonly("alphabet", &FiniteFunction::alphabet)
      .def("__len__", &FiniteFunction::size)
      .def("values", [](const FiniteFunction& f) -> py::object {
        if (f.is_finite()) return py::cast(std::vector<int>(f.finite_values().begin(), f.finite_values().end()));
        if (f.is_real()) return py::cast(f.to_real());
        return py::cast(f.to_complex());
      })
      .def("__str__", &format_function);

  m.def("gowers_norm", [](const FiniteFunction& f, int order) { return gowers_norm(f, order); }, py::arg("f"),
        py::arg("order"), py::call_guard<py::gil_scoped_release>());
  m.def(
      "gowers_estimate",
      [](const FiniteFunction& f, int order, std::uint64_t samples, std::uint64_t seed) {
        const auto est = gowers_norm_estimate(f, order, samples, seed);
        py::dict out;
        out["value"] = est.value;
        out["power"] = est.power;
        out["std_error"] = est.std_error;
        out["clamped"] = est.clamped;
        return out;
      },
      py::arg("f"), py::arg("order"), py::arg("samples"), py::arg("seed") = 0);

  m.def("l1_distance", &l1_distance);
  m.def("rm_distance", &rm_distance, py::arg("f"), py::arg("degree"));
  m.def(
      "property_distance",
      [](const FiniteFunction& f, const std::string& spec) { return make_property(spec, f.params().p())->distance(f); },
      py::arg("f"), py::arg("property"));

  m.def("mu_exact", [](const FiniteFunction& f, int k) { return distribution_dict(mu_exact(f, k)); }, py::arg("f"),
        py::arg("k"));
  m.def(
      "mu_estimate",
      [](const FiniteFunction& f, int k, std::uint64_t samples, std::uint64_t seed) {
        return distribution_dict(mu_estimate(f, k, samples, seed));
      },
      py::arg("f"), py::arg("k"), py::arg("samples"), py::arg("seed") = 0);
  m.def(
      "stat_distance",
      [](const py::dict& a, const py::dict& b) { return stat_distance(distribution_from(a), distribution_from(b)); },
      py::arg("a"), py::arg("b"));

  m.def(
      "verify_degree",
      [](const std::string& poly_text, int degree) {
        std::istringstream in(poly_text);
        return verify_degree(parse_poly(in, "<string>"), degree);
      },
      py::arg("poly"), py::arg("degree"));

  m.def(
      "distance_tester",
      [](const FiniteFunction& f, const std::string& spec, double delta, double eps, int dim, std::uint64_t trials,
         std::uint64_t seed) {
        const auto property = make_property(spec, f.params().p());
        TesterConfig cfg;
        cfg.delta = delta;
        cfg.eps = eps;
        cfg.m = dim;
        cfg.trials = trials;
        cfg.seed = seed;
        TesterResult r;
        {
          py::gil_scoped_release release;
          r = distance_tester(f, *property, cfg);
        }
        py::dict out;
        out["threshold"] = r.threshold;
        out["accepted"] = r.accepted;
        out["accept_fraction"] = r.accept_fraction;
        out["accept"] = r.accept;
        out["distances"] = r.distances;
        return out;
      },
      py::arg("f"), py::arg("property"), py::arg("delta"), py::arg("eps"), py::arg("m"), py::arg("trials"),
      py::arg("seed") = 0);

  m.def(
      "check_suite",
      [](const std::string& scale, std::uint64_t seed) {
        if (scale != "small" && scale != "medium") throw py::value_error("scale must be 'small' or 'medium'");
        std::vector<CheckResult> results;
        {
          py::gil_scoped_release release;
          results = run_check_suite(scale == "small" ? CheckScale::kSmall : CheckScale::kMedium, seed);
        }
        py::list out;
        for (const auto& r : results) {
          py::dict d;
          d["name"] = r.name;
          d["passed"] = r.passed();
          d["instances"] = r.instances;
          d["violations"] = r.violations;
          out.append(d);
        }
        return out;
      },
      py::arg("scale") = "small", py::arg("seed") = 0);

  m.def("set_threads", &set_thread_count, py::arg("threads"));

  // Same entry point as the executable; returns (exit code, stdout, stderr).
  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
