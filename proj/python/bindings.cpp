#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "lnlab/acceptance.hpp"
#include "lnlab/admissible.hpp"
#include "lnlab/cone.hpp"
#include "lnlab/errors.hpp"
#include "lnlab/geometry.hpp"
#include "lnlab/report_io.hpp"
#include "lnlab/solver.hpp"

namespace py = pybind11;
using namespace lnlab;

namespace {

// Reports cross the boundary as JSON text; the Python side parses them.
std::string text(const nlohmann::ordered_json& j) {
  std::ostringstream os;
  write_json(os, j);
  return os.str();
}

ConeSpec cone_of(int n, int k, double tau) {
  ConeSpec c{n, k, tau};
  c.validate();
  return c;
}

Spectrum spectrum_of(const std::vector<double>& lam) { return Spectrum(lam); }

ProblemSpec problem(int n, int k, double tau, const std::string& domain,
                    double radius, double inner, double outer, double delta,
                    int grid, const std::vector<double>& rhs) {
  ProblemSpec s;
  s.n = n;
  s.k = k;
  s.tau = tau;
  if (domain == "ball") {
    s.domain = Ball{radius};
  } else if (domain == "annulus") {
    s.domain = Annulus{inner, outer};
  } else {
    throw InvalidArgument("domain must be 'ball' or 'annulus'");
  }
  s.delta_inner = s.delta_outer = delta;
  s.grid = grid;
  s.rhs.coefficients = rhs;
  s.validate();
  return s;
}

}  // namespace

PYBIND11_MODULE(_lnlab, m) {
  m.doc() = "Radial sigma_k Loewner-Nirenberg lab";

  static py::exception<Error> base(m, "LnlabError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InvalidArgument& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const Error& e) {
      base(e.what());
    }
  });

  m.def("sigma_k",
        [](const std::vector<double>& lam, int j) {
          return sigma_k(spectrum_of(lam), j);
        },
        py::arg("lam"), py::arg("j"));
  m.def("tau_deform",
        [](const std::vector<double>& lam, double tau) {
          const auto s = tau_deform(spectrum_of(lam), tau);
          return std::vector<double>(s.values().begin(), s.values().end());
        },
        py::arg("lam"), py::arg("tau"));
  m.def("in_cone",
        [](const std::vector<double>& lam, int k, double tau) {
          const auto c = cone_of(static_cast<int>(lam.size()), k, tau);
          const auto mem = in_cone(c, spectrum_of(lam));
          return py::make_tuple(mem.inside, mem.margin);
        },
        py::arg("lam"), py::arg("k"), py::arg("tau") = 1.0,
        "(inside, margin) for the cone Gamma_k^tau in dimension len(lam)");
  m.def("f_eval",
        [](const std::vector<double>& lam, int k, double tau) {
          return f_eval(cone_of(static_cast<int>(lam.size()), k, tau),
                        spectrum_of(lam));
        },
        py::arg("lam"), py::arg("k"), py::arg("tau") = 1.0);
  m.def("grad_f",
        [](const std::vector<double>& lam, int k, double tau) {
          const auto g = grad_f(cone_of(static_cast<int>(lam.size()), k, tau),
                                spectrum_of(lam));
          return std::vector<double>(g.values().begin(), g.values().end());
        },
        py::arg("lam"), py::arg("k"), py::arg("tau") = 1.0);
  m.def("mu_plus",
        [](int n, int k, double tau) { return mu_plus(cone_of(n, k, tau)); },
        py::arg("n"), py::arg("k"), py::arg("tau") = 1.0);
  m.def("contains_ray_e1",
        [](int n, int k, double tau) {
          return contains_ray_e1(cone_of(n, k, tau));
        },
        py::arg("n"), py::arg("k"), py::arg("tau") = 1.0);

  m.def("radial_schouten_spectrum",
        [](double v, double v_r, double v_rr, double r, int n) {
          const auto e = radial_schouten_spectrum(v, v_r, v_rr, r, n);
          return py::make_tuple(e.radial, e.tangential);
        },
        py::arg("v"), py::arg("v_r"), py::arg("v_rr"), py::arg("r"),
        py::arg("n"));

  m.def("certify_scan_json",
        [](const std::vector<double>& x, int n, int k) {
          const auto data = scan_background(x);
          const auto cert = find_N(data);
          return text(to_json(cert, verify_admissible(data, cert,
                                                      cone_of(n, k, 1.0))));
        },
        py::arg("x"), py::arg("n"), py::arg("k"));

  m.def("solve_json",
        [](int n, int k, double tau, const std::string& domain, double radius,
           double inner, double outer, double delta, int grid,
           const std::vector<double>& rhs) {
          const auto spec =
              problem(n, k, tau, domain, radius, inner, outer, delta, grid, rhs);
          py::gil_scoped_release release;
          return text(to_json(continuation_tau(spec)));
        },
        py::arg("n"), py::arg("k"), py::arg("tau"), py::arg("domain"),
        py::arg("radius"), py::arg("inner"), py::arg("outer"),
        py::arg("delta"), py::arg("grid"), py::arg("rhs"));

  m.def("delta_sweep_json",
        [](int n, int k, double tau, const std::string& domain, double radius,
           double inner, double outer, const std::vector<double>& deltas,
           int grid, const std::vector<double>& rhs) {
          if (deltas.empty()) throw InvalidArgument("empty delta schedule");
          const auto spec = problem(n, k, tau, domain, radius, inner, outer,
                                    deltas.front(), grid, rhs);
          py::gil_scoped_release release;
          return text(to_json(continuation_delta(spec, deltas)));
        },
        py::arg("n"), py::arg("k"), py::arg("tau"), py::arg("domain"),
        py::arg("radius"), py::arg("inner"), py::arg("outer"),
        py::arg("deltas"), py::arg("grid"), py::arg("rhs"));

  m.def("acceptance_groups", &acceptance_groups);
  m.def("verify",
        [](const std::vector<std::string>& only, std::uint64_t seed) {
          AcceptanceOptions opts;
          opts.only = only;
          opts.seed = seed;
          std::vector<CriterionResult> results;
          {
            py::gil_scoped_release release;
            results = run_acceptance(opts);
          }
          py::list out;
          for (const auto& r : results) {
            py::dict d;
            d["id"] = r.id;
            d["group"] = r.group;
            d["title"] = r.title;
            d["passed"] = r.passed;
            d["measured"] = r.measured;
            d["expected"] = r.expected;
            d["seconds"] = r.seconds;
            out.append(d);
          }
          return out;
        },
        py::arg("only") = std::vector<std::string>{},
        py::arg("seed") = AcceptanceOptions{}.seed);
}
