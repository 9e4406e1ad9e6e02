#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <optional>
#include <string>

#include "clf2d/cli.hpp"
#include "clf2d/control.hpp"
#include "clf2d/errors.hpp"

namespace py = pybind11;
using namespace clf2d;

namespace {

using Rows = std::array<std::array<double, 2>, 2>;

Mat2 to_mat(const Rows& r) { return {r[0][0], r[0][1], r[1][0], r[1][1]}; }
Vec2 to_vec(const std::array<double, 2>& v) { return {v[0], v[1]}; }

// Accepts a config dict or its JSON text.
cli::SystemConfig config_from(const py::object& cfg) {
  std::string text;
  if (py::isinstance<py::str>(cfg)) {
    text = cfg.cast<std::string>();
  } else {
    text = py::module_::import("json").attr("dumps")(cfg).cast<std::string>();
  }
  return cli::parse_config(text);
}

py::object to_python(const cli::CommandResult& res) {
  nlohmann::json report = res.report;
  report["exit_code"] = res.exit_code;
  report["text"] = res.text;
  return py::module_::import("json").attr("loads")(report.dump());
}

cli::CommandOptions with_p(cli::CommandOptions opt, const std::optional<Rows>& P) {
  if (P) {
    opt.p11 = (*P)[0][0];
    opt.p12 = (*P)[0][1];
    opt.p22 = (*P)[1][1];
  }
  return opt;
}

}  // namespace

PYBIND11_MODULE(_clf2d, m) {
  m.doc() = "Design, certification and simulation of quadratic CLFs for 2D bilinear systems";

  py::register_exception<cli::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<Error>(m, "Clf2dError", PyExc_RuntimeError);

  m.def("analyze", [](const py::object& cfg) { return to_python(cli::run_analyze(config_from(cfg))); },
        py::arg("config"));

  m.def(
      "design",
      [](const py::object& cfg, std::optional<double> p1_max, std::optional<double> p2_max,
         std::optional<int> steps) {
        cli::CommandOptions opt;
        opt.grid_p1_max = p1_max;
        opt.grid_p2_max = p2_max;
        opt.grid_steps = steps;
        return to_python(cli::run_design(config_from(cfg), opt));
      },
      py::arg("config"), py::arg("p1_max") = py::none(), py::arg("p2_max") = py::none(),
      py::arg("steps") = py::none());

  m.def(
      "verify",
      [](const py::object& cfg, const Rows& P) {
        return to_python(cli::run_verify(config_from(cfg), with_p({}, P)));
      },
      py::arg("config"), py::arg("P"));

  m.def(
      "simulate",
      [](const py::object& cfg, std::optional<Rows> P, std::optional<double> dt,
         std::optional<double> T, const std::string& out_dir) {
        cli::CommandOptions opt = with_p({}, P);
        opt.dt = dt;
        opt.T = T;
        opt.out_dir = out_dir;
        return to_python(cli::run_simulate(config_from(cfg), opt));
      },
      py::arg("config"), py::arg("P") = py::none(), py::arg("dt") = py::none(),
      py::arg("T") = py::none(), py::arg("out_dir") = ".");

  m.def(
      "gutman_u",
      [](const Rows& A, const Rows& N, const std::array<double, 2>& b, const Rows& P, double alpha,
         const std::array<double, 2>& x) {
        return gutman_u({to_mat(A), to_mat(N), to_vec(b)}, to_mat(P), alpha, to_vec(x));
      },
      py::arg("A"), py::arg("N"), py::arg("b"), py::arg("P"), py::arg("alpha"), py::arg("x"));

  m.def(
      "sontag_u",
      [](const Rows& A, const Rows& N, const std::array<double, 2>& b, const Rows& P,
         const std::array<double, 2>& x) {
        return sontag_u({to_mat(A), to_mat(N), to_vec(b)}, to_mat(P), to_vec(x));
      },
      py::arg("A"), py::arg("N"), py::arg("b"), py::arg("P"), py::arg("x"));
}
