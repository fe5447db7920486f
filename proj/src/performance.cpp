#include "arsim/performance.hpp"

#include "arsim/atmosphere.hpp"
#include "arsim/chart.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace arsim::performance {

using chart::ValidationError;
using nlohmann::json;

const DragPolar& PerformanceModel::polar(Config c) const {
    switch (c) {
    case Config::Cruise: return cruise;
    case Config::InitialClimb: return initial_climb;
    case Config::Approach: return approach;
    }
    return cruise;
}

Config select_config(double climb_rate_ms) {
    if (climb_rate_ms >= 1.0)
        return Config::InitialClimb;
    if (climb_rate_ms <= -1.0)
        return Config::Approach;
    return Config::Cruise;
}

double lift_coefficient(const PerformanceModel& model, double density_kgm3,
                        const FlightSample& sample) {
    if (!(density_kgm3 > 0.0) || !(sample.speed_ms > 0.0))
        throw std::invalid_argument("lift_coefficient: density and speed must be positive");
    return 2.0 * model.mass_kg * kGravity /
           (density_kgm3 * sample.speed_ms * sample.speed_ms * model.wing_area_m2) *
           std::cos(sample.path_angle_rad);
}

double drag_force(const PerformanceModel& model, double density_kgm3, const FlightSample& sample,
                  Config config) {
    const double cl = lift_coefficient(model, density_kgm3, sample);
    const auto& polar = model.polar(config);
    const double cd = polar.cd0 + polar.cd2 * cl * cl;
    return cd * 0.5 * density_kgm3 * sample.speed_ms * sample.speed_ms * model.wing_area_m2;
}

double instant_thrust(const PerformanceModel& model, const FlightSample& sample) {
    const double rho = atmosphere::isa_sample(sample.altitude_m).density_kgm3;
    const double drag = drag_force(model, rho, sample, select_config(sample.climb_rate_ms));
    return drag +
           model.mass_kg * (kGravity * sample.climb_rate_ms / sample.speed_ms + sample.accel_ms2);
}

double instant_fuel(const PerformanceModel& model, const FlightSample& sample, double thrust_n) {
    const double h_ft = sample.altitude_m / kMetersPerFoot;
    if (sample.climb_rate_ms >= 0.0 || h_ft < model.idle_altitude_ft) {
        const double v_kt = sample.speed_ms / kMetersPerSecondPerKnot;
        const double eta = model.fuel.cf1 * (1.0 + v_kt / model.fuel.cf2) / 1000.0;
        return eta * std::max(thrust_n, 0.0);
    }
    return model.fuel.cf3 * (1.0 - h_ft / model.fuel.cf4);
}

void aggregate_step(FuelLedger& ledger, double flow_kgmin, double dt_s) {
    if (flow_kgmin < 0.0)
        throw std::invalid_argument("aggregate_step: fuel flow must be nonnegative");
    ledger.flow_kgmin = flow_kgmin;
    ledger.aggregated_kg += flow_kgmin * dt_s / 60.0;
}

namespace {

double number_at(const json& j, const std::string& key, const std::string& where) {
    const std::string path = where.empty() ? key : where + "." + key;
    if (!j.contains(key))
        throw ValidationError(path, "missing field");
    if (!j.at(key).is_number())
        throw ValidationError(path, "must be a number");
    return j.at(key).get<double>();
}

double positive_at(const json& j, const std::string& key, const std::string& where) {
    const double v = number_at(j, key, where);
    if (!(v > 0.0))
        throw ValidationError(where.empty() ? key : where + "." + key, "must be > 0");
    return v;
}

DragPolar polar_at(const json& j, const std::string& key) {
    if (!j.contains("polar") || !j.at("polar").contains(key))
        throw ValidationError("polar." + key, "missing field");
    const json& p = j.at("polar").at(key);
    return DragPolar{positive_at(p, "cd0", "polar." + key), positive_at(p, "cd2", "polar." + key)};
}

} // namespace

PerformanceModel load_performance(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError("<document>", e.what());
    }

    PerformanceModel m;
    if (j.contains("type") && j.at("type").is_string())
        m.type = j.at("type").get<std::string>();
    m.mass_kg = positive_at(j, "mass_kg", "");
    m.wing_area_m2 = positive_at(j, "wing_area_m2", "");
    m.cruise = polar_at(j, "CR");
    m.initial_climb = polar_at(j, "IC");
    m.approach = polar_at(j, "AP");
    if (!j.contains("fuel"))
        throw ValidationError("fuel", "missing field");
    const json& f = j.at("fuel");
    m.fuel.cf1 = positive_at(f, "cf1", "fuel");
    m.fuel.cf2 = positive_at(f, "cf2", "fuel");
    m.fuel.cf3 = positive_at(f, "cf3", "fuel");
    m.fuel.cf4 = positive_at(f, "cf4", "fuel");
    m.fuel.cfcr = positive_at(f, "cfcr", "fuel");
    m.idle_altitude_ft = j.contains("idle_altitude_ft") ? positive_at(j, "idle_altitude_ft", "")
                                                        : 2000.0;
    return m;
}

std::string save_performance(const PerformanceModel& m) {
    json j;
    j["type"] = m.type;
    j["mass_kg"] = m.mass_kg;
    j["wing_area_m2"] = m.wing_area_m2;
    j["polar"] = {{"CR", {{"cd0", m.cruise.cd0}, {"cd2", m.cruise.cd2}}},
                  {"IC", {{"cd0", m.initial_climb.cd0}, {"cd2", m.initial_climb.cd2}}},
                  {"AP", {{"cd0", m.approach.cd0}, {"cd2", m.approach.cd2}}}};
    j["fuel"] = {{"cf1", m.fuel.cf1},
                 {"cf2", m.fuel.cf2},
                 {"cf3", m.fuel.cf3},
                 {"cf4", m.fuel.cf4},
                 {"cfcr", m.fuel.cfcr}};
    j["idle_altitude_ft"] = m.idle_altitude_ft;
    return j.dump(2) + "\n";
}

} // namespace arsim::performance
