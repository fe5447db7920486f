#include "arsim/ars.hpp"
#include "arsim/atmosphere.hpp"
#include "arsim/chart.hpp"
#include "arsim/engine.hpp"
#include "arsim/geometry.hpp"
#include "arsim/performance.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace arsim;

namespace {

py::dict report_dict(const engine::RunReport& r) {
    py::dict d;
    d["procedure"] = std::string(engine::to_string(r.procedure));
    d["outcome"] = std::string(engine::to_string(r.outcome));
    d["maneuver_time_s"] = r.maneuver_time_s;
    d["maneuver_fuel_kg"] = r.maneuver_fuel_kg;
    d["goaround_time_s"] = r.goaround_time_s;
    d["landing_time_s"] = r.landing_time_s;
    if (r.separation_min_s)
        d["separation_min_s"] = *r.separation_min_s;
    return d;
}

} // namespace

PYBIND11_MODULE(_arsim, m) {
    m.doc() = "Approach-flow simulator: ISA atmosphere, Dubins geometry, BADA3-style "
              "performance, and the missed-approach reinjection planner";

    py::class_<atmosphere::AirSample>(m, "AirSample")
        .def_readonly("temperature_k", &atmosphere::AirSample::temperature_k)
        .def_readonly("pressure_pa", &atmosphere::AirSample::pressure_pa)
        .def_readonly("density_kgm3", &atmosphere::AirSample::density_kgm3);
    m.def("isa_sample", &atmosphere::isa_sample, py::arg("altitude_m"));

    py::class_<geometry::Pose2D>(m, "Pose2D")
        .def(py::init<double, double, double>(), py::arg("x"), py::arg("y"), py::arg("psi"))
        .def_readonly("x", &geometry::Pose2D::x)
        .def_readonly("y", &geometry::Pose2D::y)
        .def_readonly("psi", &geometry::Pose2D::psi);
    py::class_<geometry::DubinsPath>(m, "DubinsPath")
        .def_property_readonly("word",
                               [](const geometry::DubinsPath& p) {
                                   return std::string(geometry::to_string(p.word));
                               })
        .def_readonly("lengths", &geometry::DubinsPath::lengths)
        .def("total_length", &geometry::DubinsPath::total_length)
        .def("sample", [](const geometry::DubinsPath& p, double s) {
            return geometry::dubins_sample(p, s);
        });
    m.def("dubins_shortest", &geometry::dubins_shortest, py::arg("start"), py::arg("goal"),
          py::arg("radius"));

    py::class_<performance::FlightSample>(m, "FlightSample")
        .def(py::init([](double v, double vdot, double gamma, double h, double hdot) {
                 return performance::FlightSample{v, vdot, gamma, h, hdot};
             }),
             py::arg("speed_ms"), py::arg("accel_ms2"), py::arg("path_angle_rad"),
             py::arg("altitude_m"), py::arg("climb_rate_ms"));
    py::class_<performance::PerformanceModel>(m, "PerformanceModel")
        .def_static("from_json", &performance::load_performance)
        .def_readonly("mass_kg", &performance::PerformanceModel::mass_kg)
        .def_readonly("wing_area_m2", &performance::PerformanceModel::wing_area_m2)
        .def("instant_thrust",
             [](const performance::PerformanceModel& model,
                const performance::FlightSample& s) {
                 return performance::instant_thrust(model, s);
             })
        .def("instant_fuel", [](const performance::PerformanceModel& model,
                                const performance::FlightSample& s, double thrust) {
            return performance::instant_fuel(model, s, thrust);
        });

    m.def("builtin_chart_json",
          [] { return chart::save_chart(chart::builtin_malaga_rwy13()); });
    m.def(
        "run_scenario",
        [](const std::string& scenario_json, const std::string& base_dir) {
            const auto cfg = engine::load_scenario(scenario_json, base_dir);
            return report_dict(engine::run(cfg));
        },
        py::arg("scenario_json"), py::arg("base_dir") = ".");
    m.def(
        "sweep_scenario",
        [](const std::string& scenario_json, const std::string& base_dir,
           const std::vector<double>& spacings, const std::vector<int>& distances, int jobs) {
            const auto cfg = engine::load_scenario(scenario_json, base_dir);
            const auto cells = engine::sweep(cfg, spacings, distances, jobs);
            py::list out;
            for (const auto& c : cells) {
                py::dict d;
                d["T_s_s"] = c.spacing_s;
                d["distance_to_gap"] = c.distance_to_gap;
                d["t_conv_s"] = c.t_conv_s;
                d["t_ars_s"] = c.t_ars_s;
                d["f_conv_kg"] = c.f_conv_kg;
                d["f_ars_kg"] = c.f_ars_kg;
                d["time_saving"] = c.time_saving;
                d["fuel_saving"] = c.fuel_saving;
                d["failed"] = c.failed;
                out.append(d);
            }
            return out;
        },
        py::arg("scenario_json"), py::arg("base_dir") = ".", py::arg("spacings"),
        py::arg("distances"), py::arg("jobs") = 1);
}
