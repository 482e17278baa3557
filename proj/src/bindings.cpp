#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <string>
#include <vector>

#include "oujump/cli.hpp"
#include "oujump/errors.hpp"
#include "oujump/kernel.hpp"
#include "oujump/model.hpp"
#include "oujump/ruin.hpp"
#include "oujump/simulate.hpp"

namespace py = pybind11;

namespace {

using namespace oujump;

py::dict to_dict(const RuinResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["imag_residual"] = r.imag_residual;
  d["condition"] = r.diagnostics.condition;
  d["quad_budget"] = r.diagnostics.quad_error;
  if (r.continuous_part) d["continuous_part"] = *r.continuous_part;
  return d;
}

py::dict to_dict(const Estimate& e) {
  py::dict d;
  d["mean"] = e.mean;
  d["stderr"] = e.std_err;
  d["n"] = e.n;
  d["bias_bound"] = e.bias_bound;
  d["truncation_note"] = e.truncation_note;
  return d;
}

py::dict to_dict(const AsymptoticResult& a) {
  py::dict d;
  d["constant"] = a.constant;
  d["exp_rate"] = a.exp_rate;
  d["power"] = a.power;
  py::dict ing;
  for (const auto& [k, v] : a.ingredients) ing[k.c_str()] = v;
  d["ingredients"] = ing;
  return d;
}

}  // namespace

PYBIND11_MODULE(_oujump, m) {
  m.doc() = "first-passage analytics for Ornstein-Uhlenbeck processes with "
            "two-sided mixed-exponential jumps";

  py::register_exception<oujump::Error>(m, "OUJumpError");

  py::class_<OUModel>(m, "Model")
      .def_property_readonly("kappa",
                             [](const OUModel& mod) { return mod.kappa; })
      .def_property_readonly("lambda_",
                             [](const OUModel& mod) { return mod.lambda; })
      .def_property_readonly("p",
                             [](const OUModel& mod) { return mod.jumps.p; })
      .def_property_readonly("r", [](const OUModel& mod) { return mod.r(); })
      .def_property_readonly("s", [](const OUModel& mod) { return mod.s(); });

  m.def(
      "make_model",
      [](double kappa, double lambda, double p, std::vector<double> alphas,
         std::vector<double> mus, std::vector<double> betas,
         std::vector<double> nus) {
        return validate_model(kappa, lambda, p, alphas, mus, betas, nus);
      },
      py::arg("kappa"), py::arg("lambda_"), py::arg("p"), py::arg("alphas"),
      py::arg("mus"), py::arg("betas") = std::vector<double>{},
      py::arg("nus") = std::vector<double>{});

  m.def(
      "psi",
      [](const OUModel& mod, std::complex<double> z) {
        return psi_principal(mod, z);
      },
      py::arg("model"), py::arg("z"),
      "kernel value with principal branch determinations");

  m.def(
      "classify_points",
      [](const OUModel& mod) {
        py::list out;
        for (const PointClass& p : classify_points(mod)) {
          out.append(py::make_tuple(
              p.location, p.exponent,
              p.kind == PointKind::Zero ? "zero" : "singularity"));
        }
        return out;
      },
      py::arg("model"));

  m.def(
      "ruin_probability",
      [](const OUModel& mod, double x, double level) {
        return to_dict(ruin_probability(mod, x, level));
      },
      py::arg("model"), py::arg("x"), py::arg("level"));

  m.def(
      "laplace_undershoot",
      [](const OUModel& mod, double x, double level, double zeta) {
        return to_dict(laplace_undershoot(mod, Query{x, level, zeta}));
      },
      py::arg("model"), py::arg("x"), py::arg("level"), py::arg("zeta"));

  m.def(
      "recurrent_split",
      [](const OUModel& mod, double x, double level) {
        const auto [cont, jump] = recurrent_split(mod, x, level);
        return py::make_tuple(to_dict(cont), to_dict(jump));
      },
      py::arg("model"), py::arg("x"), py::arg("level"));

  m.def(
      "asymptotic_k",
      [](const OUModel& mod, double level) {
        return to_dict(asymptotic_K(mod, level));
      },
      py::arg("model"), py::arg("level"));

  m.def(
      "limit_ruin_level",
      [](const OUModel& mod, double x) {
        return to_dict(limit_ruin_level(mod, x));
      },
      py::arg("model"), py::arg("x"));

  m.def(
      "undershoot_limit",
      [](const OUModel& mod, double zeta) {
        return undershoot_limit(mod, zeta).constant.real();
      },
      py::arg("model"), py::arg("zeta"));

  m.def(
      "estimate_ruin",
      [](const OUModel& mod, double x, double level, std::uint64_t seed,
         std::int64_t paths, double horizon, double barrier) {
        PathConfig c;
        c.seed = seed;
        c.n_paths = paths;
        c.horizon = horizon;
        c.upper_barrier = barrier;
        return to_dict(estimate_ruin(mod, x, level, c));
      },
      py::arg("model"), py::arg("x"), py::arg("level"), py::arg("seed") = 1,
      py::arg("paths") = 100000, py::arg("horizon") = 1e5,
      py::arg("barrier") = 0.0);

  m.def(
      "estimate_laplace",
      [](const OUModel& mod, double x, double level, double zeta,
         std::uint64_t seed, std::int64_t paths, double horizon,
         double barrier) {
        PathConfig c;
        c.seed = seed;
        c.n_paths = paths;
        c.horizon = horizon;
        c.upper_barrier = barrier;
        const LaplaceSplit s = estimate_laplace(mod, x, level, zeta, c);
        return py::make_tuple(to_dict(s.jump), to_dict(s.cont));
      },
      py::arg("model"), py::arg("x"), py::arg("level"), py::arg("zeta"),
      py::arg("seed") = 1, py::arg("paths") = 100000,
      py::arg("horizon") = 1e5, py::arg("barrier") = 0.0);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::string text;
        const int code = run_cli(args, text);
        return py::make_tuple(code, text);
      },
      py::arg("args"),
      "run a CLI invocation in-process; returns (exit_code, output)");
}
