#include "arsim/chart.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

namespace arsim::chart {

namespace {
using nlohmann::json;

constexpr double kTwentyNmM = 37040.0;
} // namespace

const Waypoint& ApproachChart::find(const std::string& wp_name) const {
    for (const auto& wp : waypoints)
        if (wp.name == wp_name)
            return wp;
    throw ValidationError("waypoints", "unknown waypoint '" + wp_name + "'");
}

std::size_t ApproachChart::nominal_index(const std::string& wp_name) const {
    for (std::size_t i = 0; i < nominal.size(); ++i)
        if (nominal[i] == wp_name)
            return i;
    return static_cast<std::size_t>(-1);
}

ApproachSequence ApproachChart::nominal_sequence() const {
    ApproachSequence seq;
    seq.waypoints.reserve(nominal.size());
    for (const auto& n : nominal)
        seq.waypoints.push_back(find(n));
    return seq;
}

ApproachSequence ApproachChart::conventional_route() const {
    ApproachSequence seq;
    for (const auto& n : missed_route) {
        Waypoint wp = find(n);
        wp.expedite_altitude = true; // published go-around climb
        seq.waypoints.push_back(wp);
    }
    const std::size_t rejoin = nominal_index(missed_route.back());
    for (std::size_t i = rejoin + 1; i < nominal.size(); ++i)
        seq.waypoints.push_back(find(nominal[i]));
    if (!seq.waypoints.empty()) {
        // The first leg is flown straight out from the missed approach point.
        const Waypoint& mapt_wp = find(mapt);
        Waypoint& first = seq.waypoints.front();
        const double dx = first.x - mapt_wp.x;
        const double dy = first.y - mapt_wp.y;
        if (std::hypot(dx, dy) > 1e-9)
            first.fly_heading = std::atan2(dy, dx);
    }
    return seq;
}

void ApproachChart::validate() const {
    if (waypoints.empty())
        throw ValidationError("waypoints", "empty");
    std::set<std::string> names;
    for (std::size_t i = 0; i < waypoints.size(); ++i) {
        const auto& wp = waypoints[i];
        const std::string where = "waypoints[" + std::to_string(i) + "]";
        if (wp.name.empty())
            throw ValidationError(where + ".name", "empty");
        if (!names.insert(wp.name).second)
            throw ValidationError(where + ".name", "duplicate waypoint name '" + wp.name + "'");
        if (!(wp.speed > 0.0))
            throw ValidationError(where + ".speed", "must be > 0");
        if (wp.z < 0.0)
            throw ValidationError(where + ".z", "must be >= 0");
    }
    if (nominal.empty())
        throw ValidationError("nominal", "empty");
    for (const auto& n : nominal)
        if (!names.count(n))
            throw ValidationError("nominal", "unknown waypoint '" + n + "'");
    for (std::size_t i = 1; i < nominal.size(); ++i) {
        const auto& a = find(nominal[i - 1]);
        const auto& b = find(nominal[i]);
        if (std::hypot(b.x - a.x, b.y - a.y) < 1e-9)
            throw ValidationError("nominal", "consecutive waypoints '" + a.name + "' and '" +
                                                 b.name + "' coincide");
    }
    if (entry.empty() || nominal_index(entry) == static_cast<std::size_t>(-1))
        throw ValidationError("entry", "must name a fix on the nominal sequence");
    if (mapt.empty())
        throw ValidationError("mapt", "missing");
    if (nominal_index(mapt) == static_cast<std::size_t>(-1))
        throw ValidationError("mapt", "'" + mapt + "' is not on the nominal sequence");
    if (missed_route.empty())
        throw ValidationError("missed_route", "empty");
    for (const auto& n : missed_route)
        if (!names.count(n))
            throw ValidationError("missed_route", "unknown waypoint '" + n + "'");
    if (nominal_index(missed_route.back()) == static_cast<std::size_t>(-1))
        throw ValidationError("missed_route",
                              "must terminate at a waypoint on the nominal sequence");
}

ApproachChart builtin_malaga_rwy13() {
    ApproachChart c;
    c.name = "Malaga RWY13";
    c.waypoints = {
        {"LOJAS", 32115.94, 7950.47, 2133.60, 123.47},
        {"TOLSU", 3788.66, 49848.85, 2133.60, 123.47},
        {"MARTIN", -38123.21, 41103.20, 2133.60, 123.47},
        {"MG403", -29788.86, 28279.77, 1524, 123.47},
        {"MG402", -26759.25, 23616.67, 1524, 82.31},
        {"MG401", -16175.05, 14299.41, 1280.16, 82.31},
        {"RWY13/LTP", 55.74, -53.08, 15.85, 72.02},
        {"RWY13", 2179.44, -2035.92, 15.85, 25.72},
        {"XILVI", 36907.56, -7831.11, 670.56, 113.18},
    };

    // Runway-heading leg of the conventional go-around: 20 NM out from the
    // MAPt along the runway bearing, flown at XILVI's altitude and speed.
    const auto& ltp = c.waypoints[6];
    const auto& rollout = c.waypoints[7];
    const double brg = std::atan2(rollout.y - ltp.y, rollout.x - ltp.x);
    c.waypoints.push_back({"MA20NM", ltp.x + kTwentyNmM * std::cos(brg),
                           ltp.y + kTwentyNmM * std::sin(brg), 670.56, 113.18});

    c.nominal = {"LOJAS", "TOLSU", "MARTIN", "MG403", "MG402", "MG401", "RWY13/LTP"};
    c.entry = "LOJAS";
    c.mapt = "RWY13/LTP";
    c.missed_route = {"MA20NM", "XILVI", "TOLSU"};
    c.validate();
    return c;
}

namespace {

json require(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key))
        throw ValidationError(where.empty() ? key : where + "." + key, "missing field");
    return j.at(key);
}

double require_number(const json& j, const std::string& key, const std::string& where) {
    const json v = require(j, key, where);
    if (!v.is_number())
        throw ValidationError(where.empty() ? key : where + "." + key, "must be a number");
    return v.get<double>();
}

std::vector<std::string> name_list(const json& j, const std::string& key) {
    const json v = require(j, key, "");
    if (!v.is_array())
        throw ValidationError(key, "must be an array of waypoint names");
    std::vector<std::string> out;
    for (const auto& e : v) {
        if (!e.is_string())
            throw ValidationError(key, "must be an array of waypoint names");
        out.push_back(e.get<std::string>());
    }
    return out;
}

} // namespace

ApproachChart load_chart(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError("<document>", e.what());
    }

    ApproachChart c;
    c.name = require(j, "name", "").is_string() ? j["name"].get<std::string>() : "";
    const json frame = require(j, "frame", "");
    if (frame != "runway-touchdown-meters")
        throw ValidationError("frame", "expected \"runway-touchdown-meters\"");

    const json wps = require(j, "waypoints", "");
    if (!wps.is_array() || wps.empty())
        throw ValidationError("waypoints", "must be a nonempty array");
    for (std::size_t i = 0; i < wps.size(); ++i) {
        const std::string where = "waypoints[" + std::to_string(i) + "]";
        const json& w = wps[i];
        Waypoint wp;
        const json n = require(w, "name", where);
        if (!n.is_string())
            throw ValidationError(where + ".name", "must be a string");
        wp.name = n.get<std::string>();
        wp.x = require_number(w, "x", where);
        wp.y = require_number(w, "y", where);
        wp.z = require_number(w, "z", where);
        wp.speed = require_number(w, "speed", where);
        c.waypoints.push_back(wp);
    }
    c.nominal = name_list(j, "nominal");
    const json mapt = require(j, "mapt", "");
    if (!mapt.is_string())
        throw ValidationError("mapt", "must be a string");
    c.mapt = mapt.get<std::string>();
    c.missed_route = name_list(j, "missed_route");
    const json entry = require(j, "entry", "");
    if (!entry.is_string())
        throw ValidationError("entry", "must be a string");
    c.entry = entry.get<std::string>();

    c.validate();
    return c;
}

std::string save_chart(const ApproachChart& chart) {
    json j;
    j["name"] = chart.name;
    j["frame"] = "runway-touchdown-meters";
    j["waypoints"] = json::array();
    for (const auto& wp : chart.waypoints)
        j["waypoints"].push_back({{"name", wp.name},
                                  {"x", wp.x},
                                  {"y", wp.y},
                                  {"z", wp.z},
                                  {"speed", wp.speed}});
    j["nominal"] = chart.nominal;
    j["mapt"] = chart.mapt;
    j["missed_route"] = chart.missed_route;
    j["entry"] = chart.entry;
    return j.dump(2) + "\n";
}

} // namespace arsim::chart
