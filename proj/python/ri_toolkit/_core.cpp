#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ri/error.hpp"
#include "ri/harness.hpp"
#include "ri/json_io.hpp"
#include "ri/lk_spaces.hpp"
#include "ri/operators.hpp"
#include "ri/optimal.hpp"

namespace py = pybind11;

namespace {

ri::json to_json(const py::object& o) {
  const auto dumps = py::module_::import("json").attr("dumps");
  return ri::json::parse(dumps(o).cast<std::string>());
}

py::object to_py(const ri::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

ri::LKSpace space(const py::object& o) { return ri::space_from_json(to_json(o), "space"); }

ri::SmoothnessParams params(const ri::MonomialCone& cone, int m) {
  if (m < 1 || !(m < cone.D())) throw ri::DomainError("need 1 <= m < D");
  return ri::SmoothnessParams::of(cone, m);
}

ri::EquivalenceOptions equivalence(int family_size, std::uint64_t seed) {
  ri::EquivalenceOptions eo;
  eo.family_size = family_size;
  eo.seed = seed;
  return eo;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Rearrangement-invariant norms and optimal Sobolev spaces on weighted cones";

  py::register_exception<ri::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ri::DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ri::NonExistentError>(m, "NonExistentError", PyExc_RuntimeError);

  py::class_<ri::MonomialCone>(m, "MonomialCone")
      .def(py::init<int, int, std::vector<double>>(), py::arg("n"), py::arg("k"), py::arg("A"))
      .def_property_readonly("n", &ri::MonomialCone::n)
      .def_property_readonly("k", &ri::MonomialCone::k)
      .def_property_readonly("A", &ri::MonomialCone::A)
      .def_property_readonly("alpha", &ri::MonomialCone::alpha)
      .def_property_readonly("D", &ri::MonomialCone::D)
      .def_property_readonly("B_mu", &ri::MonomialCone::B_mu)
      .def("sigma", [](const ri::MonomialCone& c, std::vector<double> x) { return ri::sigma_map(c, x); })
      .def(
          "ball_measure_mc",
          [](const ri::MonomialCone& c, std::int64_t samples, std::uint64_t seed) {
            const auto e = ri::ball_measure_mc(c, samples, seed);
            return std::make_pair(e.estimate, e.stderr_);
          },
          py::arg("samples"), py::arg("seed") = 1)
      .def("default_c_iso", [](const ri::MonomialCone& c) { return ri::default_c_iso(c); });

  py::class_<ri::StepFunction>(m, "StepFunction")
      .def(py::init<>())
      .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("breakpoints"), py::arg("values"))
      .def_property_readonly("breakpoints",
                             [](const ri::StepFunction& f) { return std::vector<double>(f.breakpoints().begin(), f.breakpoints().end()); })
      .def_property_readonly("values",
                             [](const ri::StepFunction& f) { return std::vector<double>(f.values().begin(), f.values().end()); })
      .def("__call__", &ri::StepFunction::operator())
      .def("integral", &ri::StepFunction::integral)
      .def("lp_norm", &ri::StepFunction::lp_norm)
      .def("distribution", &ri::StepFunction::distribution)
      .def("rearrange", [](const ri::StepFunction& f) { return ri::rearrange(f); })
      .def("maximal", [](const ri::StepFunction& f, double t) { return ri::maximal(f)(t); });

  m.def("lk_norm", [](const ri::StepFunction& f, const py::object& X) { return ri::lk_norm(f, space(X)); },
        py::arg("f"), py::arg("space"));
  m.def("fundamental_function", [](const py::object& X, double t) { return ri::fundamental_function(space(X), t); },
        py::arg("space"), py::arg("t"));
  m.def("associate_space", [](const py::object& X) { return to_py(ri::description_to_json(ri::associate_space(space(X)))); });

  m.def(
      "fubini_check",
      [](const ri::StepFunction& f, const ri::StepFunction& g, int mm, double D) {
        const auto r = ri::fubini_check(f, g, {mm, D});
        return py::make_tuple(r.lhs, r.rhs, r.rel_err);
      },
      py::arg("f"), py::arg("g"), py::arg("m"), py::arg("D"));
  m.def(
      "kernel_g_derivative",
      [](const ri::StepFunction& f, int mm, double D, int j, double t) { return ri::kernel_g_derivative(f, {mm, D}, j, t); },
      py::arg("f"), py::arg("m"), py::arg("D"), py::arg("j"), py::arg("t"));

  m.def("target_condition", [](const py::object& X, const ri::MonomialCone& c, int mm) {
    return ri::target_condition(space(X), params(c, mm));
  });
  m.def("domain_condition", [](const py::object& Y, const ri::MonomialCone& c, int mm) {
    return ri::domain_condition(space(Y), params(c, mm));
  });
  m.def(
      "optimal_target",
      [](const py::object& X, const ri::MonomialCone& c, int mm, int family_size, std::uint64_t seed) {
        return to_py(ri::report_to_json(ri::optimal_target(space(X), params(c, mm), equivalence(family_size, seed))));
      },
      py::arg("space"), py::arg("cone"), py::arg("m"), py::arg("family_size") = 30, py::arg("seed") = 1);
  m.def(
      "optimal_domain",
      [](const py::object& Y, const ri::MonomialCone& c, int mm, int family_size, std::uint64_t seed) {
        return to_py(ri::report_to_json(ri::optimal_domain(space(Y), params(c, mm), equivalence(family_size, seed))));
      },
      py::arg("space"), py::arg("cone"), py::arg("m"), py::arg("family_size") = 30, py::arg("seed") = 1);

  m.def("campaign_names", &ri::campaign_names);
  m.def(
      "run_campaign",
      [](const py::object& config, int threads) {
        const ri::CampaignConfig cfg = ri::parse_config(to_json(config));
        ri::Report r;
        {
          py::gil_scoped_release release;
          r = ri::run_campaign(cfg, threads);
        }
        return py::make_tuple(to_py(ri::report_to_json(r)), ri::report_to_csv(r));
      },
      py::arg("config"), py::arg("threads") = 0);
}
