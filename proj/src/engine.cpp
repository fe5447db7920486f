#include "arsim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace arsim::engine {

using chart::ValidationError;
using chart::Waypoint;
using geometry::Pose2D;
using nlohmann::json;

std::string_view to_string(Outcome o) {
    switch (o) {
    case Outcome::Landed: return "landed";
    case Outcome::FallbackConventional: return "fallback_conventional";
    case Outcome::Timeout: return "timeout";
    }
    return "?";
}

std::string_view to_string(Procedure p) {
    return p == Procedure::Ars ? "ars" : "conventional";
}

void ScenarioConfig::validate() const {
    approach.validate();
    limits.validate();
    if (!(spacing_s > 0.0))
        throw ValidationError("engine.T_s", "must be > 0");
    if (!(threshold_s > 0.0))
        throw ValidationError("engine.T_1", "must be > 0");
    if (gap_period < 0)
        throw ValidationError("engine.gap_period", "must be >= 0");
    if (distance_to_gap < 0)
        throw ValidationError("engine.distance_to_gap", "must be >= 0");
    if (lead_aircraft < -1)
        throw ValidationError("engine.lead_aircraft", "must be >= 0 (or -1 for the default)");
    if (trail_aircraft == 0 || trail_aircraft < -1)
        throw ValidationError("engine.trail_aircraft", "must be >= 1 (or -1 for the default)");
    if (gap_margin_s < 0.0)
        throw ValidationError("engine.gap_margin_s", "must be >= 0");
    if (!(goaround_altitude_m > 0.0))
        throw ValidationError("engine.goaround_altitude_m", "must be > 0");
    if (!(run_cap_s > 0.0))
        throw ValidationError("engine.run_cap_s", "must be > 0");
    if (gap_period > 0 && gap_period <= distance_to_gap + 1)
        throw ValidationError("engine.gap_period",
                              "must leave room for distance_to_gap aircraft before the gap");
}

std::optional<double> separation_monitor(const std::vector<ars::FlowEntry>& flow) {
    if (flow.size() < 2)
        return std::nullopt;
    double min_sep = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < flow.size(); ++i)
        min_sep = std::min(min_sep, flow[i + 1].eta_s - flow[i].eta_s);
    return min_sep;
}

namespace {

// Measured timing of the nominal procedure. One probe flight is integrated
// with the live guidance once per run and every on-procedure ETA is a lookup
// into its record, keyed by target leg and distance to the target fix. Any
// geometric path model drifts from the flown track by tens of seconds over
// the procedure (fly-by corner cuts, capture radii, speed transitions), and
// gaps planned against drifting ETAs erode before the merge.
struct NominalProfile {
    struct Sample {
        double x;
        double y;
        double dist; // to the target fix of this leg
        double tta;  // time to land from here
    };
    std::vector<std::vector<Sample>> rows; // per leg, in flight order
    std::vector<double> speed;
    std::vector<double> fx; // fix positions
    std::vector<double> fy;
    double total = 0.0;

    // A plane on the procedure retraces the probe's track exactly, so the
    // nearest recorded position interpolated along the track is its ETA.
    // A plain distance-to-fix key plateaus for seconds inside fly-by arcs,
    // where the distance barely changes while time runs.
    double eta(std::size_t leg, double px, double py) const {
        while (leg + 1 < rows.size() && rows[leg].empty())
            ++leg;
        const auto& r = rows[leg];
        if (r.empty())
            return 0.0;
        const double dist = std::hypot(px - fx[leg], py - fy[leg]);
        std::size_t best = 0;
        double best_d2 = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < r.size(); ++i) {
            const double dx = px - r[i].x;
            const double dy = py - r[i].y;
            const double d2 = dx * dx + dy * dy;
            if (d2 < best_d2) {
                best_d2 = d2;
                best = i;
            }
        }
        // off the recorded ends: extend along the leg at the leg speed
        if (best == 0 && dist > r.front().dist)
            return r.front().tta + (dist - r.front().dist) / speed[leg];
        if (best + 1 == r.size() && dist < r.back().dist)
            return std::max(r.back().tta - (r.back().dist - dist) / speed[leg], 0.0);
        // interpolate along the better adjacent track segment
        double out = r[best].tta;
        double seg_d2 = best_d2;
        for (const std::size_t j : {best > 0 ? best - 1 : best,
                                    best + 1 < r.size() ? best + 1 : best}) {
            if (j == best)
                continue;
            const double sx = r[j].x - r[best].x;
            const double sy = r[j].y - r[best].y;
            const double len2 = sx * sx + sy * sy;
            if (len2 < 1e-12)
                continue;
            double u = ((px - r[best].x) * sx + (py - r[best].y) * sy) / len2;
            u = std::clamp(u, 0.0, 1.0);
            const double qx = r[best].x + u * sx - px;
            const double qy = r[best].y + u * sy - py;
            const double d2 = qx * qx + qy * qy;
            if (d2 < seg_d2) {
                seg_d2 = d2;
                out = r[best].tta + u * (r[j].tta - r[best].tta);
            }
        }
        return out;
    }
};

NominalProfile build_profile(const chart::ApproachChart& chart,
                             const std::vector<Waypoint>& nominal,
                             const dynamics::GuidanceLimits& limits) {
    const std::size_t n = nominal.size();
    NominalProfile pr;
    pr.rows.resize(n);
    pr.speed.resize(n);
    pr.fx.resize(n);
    pr.fy.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        pr.speed[k] = nominal[k].speed;
        pr.fx[k] = nominal[k].x;
        pr.fy[k] = nominal[k].y;
    }

    auto st = dynamics::spawn(chart, "profile");
    st.target = 1;
    std::vector<std::tuple<std::size_t, double, double>> samples;
    int t_land = -1;
    for (int tick = 0; tick < 100000; ++tick) {
        samples.emplace_back(st.target, st.pose.x, st.pose.y);
        const auto res = dynamics::step(st, nominal, limits, 1.0);
        bool landed = false;
        for (const auto& ev : res.events)
            landed = landed || ev.kind == dynamics::Event::Kind::Landed;
        if (landed) {
            t_land = tick + 1;
            break;
        }
    }
    if (t_land < 0)
        throw chart::ValidationError("nominal", "profile flight did not land");
    pr.total = t_land;

    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& [leg, x, y] = samples[i];
        pr.rows[leg].push_back({x, y, std::hypot(x - pr.fx[leg], y - pr.fy[leg]),
                                static_cast<double>(t_land) - static_cast<double>(i)});
    }
    return pr;
}

// Per-aircraft route with cached prediction geometry: fixed goal poses per
// waypoint and suffix travel times, so an ETA costs one Dubins solve.
struct Route {
    std::vector<Waypoint> waypoints;
    std::vector<Pose2D> goals;
    std::vector<double> radius;      // per-leg turn radius from the leg speed
    std::vector<double> suffix_time; // fix i -> runway
    std::vector<int> nmap;           // waypoint -> nominal leg, -1 off procedure
    const NominalProfile* profile = nullptr;

    void rebuild(double turn_rate, const NominalProfile* prof,
                 const std::vector<Waypoint>* nominal) {
        profile = prof;
        const std::size_t n = waypoints.size();
        goals.assign(n, {});
        radius.assign(n, 0.0);
        suffix_time.assign(n, 0.0);
        nmap.assign(n, -1);
        if (profile && nominal) {
            std::size_t cursor = 0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t k = cursor; k < nominal->size(); ++k)
                    if (std::fabs(waypoints[i].x - (*nominal)[k].x) < 1e-6 &&
                        std::fabs(waypoints[i].y - (*nominal)[k].y) < 1e-6) {
                        nmap[i] = static_cast<int>(k);
                        cursor = k + 1;
                        break;
                    }
        }
        double carry = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double heading = carry;
            const auto bearing_from = [&](std::size_t a, std::size_t b, double fallback) {
                const double ox = waypoints[b].x - waypoints[a].x;
                const double oy = waypoints[b].y - waypoints[a].y;
                return std::hypot(ox, oy) > 1e-9 ? std::atan2(oy, ox) : fallback;
            };
            // Goal headings are the inbound bearings, so a plane lined up on a
            // leg predicts a straight run to the fix; the turn at the fix is
            // charged to the next leg. Outbound headings would add a spurious
            // loop once the plane is within a couple of turn radii of a fly-by.
            if (waypoints[i].fly_heading)
                heading = *waypoints[i].fly_heading;
            else if (i > 0)
                heading = bearing_from(i - 1, i, carry);
            else if (n > 1)
                heading = bearing_from(0, 1, carry);
            goals[i] = {waypoints[i].x, waypoints[i].y, geometry::normalize_angle(heading)};
            radius[i] = waypoints[i].speed / turn_rate;
            carry = goals[i].psi;
        }
        // Suffix times measure the flown fly-by track, not the chord polyline:
        // guidance starts each turn r*tan(delta/2) before the fix and rides an
        // inscribed arc, saving r*(tan(delta/2) - delta/2) per adjacent leg.
        // Once the chain reaches a fix on the measured profile the rest of the
        // suffix is the profile's own record.
        const auto corner_cut = [&](std::size_t i) {
            if (i == 0 || i + 1 >= n)
                return 0.0;
            const double ix = waypoints[i].x - waypoints[i - 1].x;
            const double iy = waypoints[i].y - waypoints[i - 1].y;
            const double ox = waypoints[i + 1].x - waypoints[i].x;
            const double oy = waypoints[i + 1].y - waypoints[i].y;
            if (std::hypot(ix, iy) < 1e-9 || std::hypot(ox, oy) < 1e-9)
                return 0.0;
            double half = std::fabs(geometry::normalize_angle(std::atan2(oy, ox) -
                                                              std::atan2(iy, ix))) / 2.0;
            half = std::min(half, geometry::kPi / 3.0);
            return radius[i] * (std::tan(half) - half);
        };
        for (std::size_t i = n; i-- > 1;) {
            const double chord = std::hypot(waypoints[i].x - waypoints[i - 1].x,
                                            waypoints[i].y - waypoints[i - 1].y);
            if (profile && nmap[i] >= 0) {
                suffix_time[i - 1] = profile->eta(static_cast<std::size_t>(nmap[i]),
                                                  waypoints[i - 1].x, waypoints[i - 1].y);
                continue;
            }
            const double len = std::max(chord - corner_cut(i) - corner_cut(i - 1), 0.0);
            suffix_time[i - 1] = suffix_time[i] + len / waypoints[i].speed;
        }
    }

    double eta(const Pose2D& pose, std::size_t target) const {
        const double direct =
            std::hypot(goals[target].x - pose.x, goals[target].y - pose.y);
        if (profile && nmap[target] >= 0)
            return profile->eta(static_cast<std::size_t>(nmap[target]), pose.x, pose.y);
        double len =
            geometry::dubins_shortest(pose, goals[target], radius[target]).total_length();
        // Close to a fix a small residual heading error makes the Dubins
        // solve detour through a near-full turn for one or two ticks before
        // capture. Detect the detour and fall back to the direct distance.
        if (len > direct + radius[target] * geometry::kPi / 2.0)
            len = direct;
        return len / waypoints[target].speed + suffix_time[target];
    }
};

struct Plane {
    dynamics::AircraftState state;
    Route route;
    double spawn_time = 0.0;
    bool spawned = false;
    bool landed = false;
    bool is_missed = false;
    bool went_around = false;
    bool plan_active = false;
    double fa_at_goaround = 0.0;
};

struct Schedule {
    std::vector<double> spawn_times;
    std::size_t missed_index = 0;
};

Schedule build_schedule(const ScenarioConfig& cfg) {
    Schedule s;
    std::size_t gap_follower;
    std::size_t count;
    if (cfg.gap_period > 0) {
        gap_follower = static_cast<std::size_t>(cfg.gap_period);
        s.missed_index = gap_follower - static_cast<std::size_t>(cfg.distance_to_gap) - 1;
        count = gap_follower + static_cast<std::size_t>(cfg.trail_count());
    } else {
        s.missed_index = static_cast<std::size_t>(cfg.lead_count());
        gap_follower = s.missed_index + static_cast<std::size_t>(cfg.distance_to_gap) + 1;
        count = gap_follower + static_cast<std::size_t>(cfg.trail_count());
    }
    s.spawn_times.resize(count);
    double t = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        if (i > 0) {
            const bool is_gap = cfg.gap_period > 0
                                    ? (i % static_cast<std::size_t>(cfg.gap_period) == 0)
                                    : (i == gap_follower);
            t += is_gap ? 2.0 * cfg.spacing_s + cfg.gap_margin_s : cfg.spacing_s;
        }
        s.spawn_times[i] = t;
    }
    return s;
}

void assign_route(Plane& plane, std::vector<Waypoint> waypoints, std::size_t target,
                  double turn_rate, const NominalProfile& profile,
                  const std::vector<Waypoint>& nominal) {
    plane.route.waypoints = std::move(waypoints);
    plane.route.rebuild(turn_rate, &profile, &nominal);
    plane.state.target = target;
}

} // namespace

RunReport run(const ScenarioConfig& config) {
    config.validate();

    RunReport report;
    report.procedure = config.procedure;

    const auto schedule = build_schedule(config);
    const auto nominal = config.approach.nominal_sequence().waypoints;
    const double turn_rate = config.limits.turn_rate_rads;
    // Interception paths are planned at the turn radius of the fastest speed
    // in the procedure: any slower speed can fly a wider arc, so the path
    // stays flyable wherever along the nominal track the merge lands.
    double max_speed = 0.0;
    for (const auto& wp : nominal)
        max_speed = std::max(max_speed, wp.speed);
    const double plan_radius = max_speed / turn_rate;

    // Measured flight time of the whole nominal procedure, for not-yet-spawned
    // ETAs and for the upstream gap-search limit.
    const NominalProfile profile = build_profile(config.approach, nominal, config.limits);
    const double nominal_total_eta = profile.total;

    std::vector<Plane> planes(schedule.spawn_times.size());
    for (std::size_t i = 0; i < planes.size(); ++i) {
        planes[i].spawn_time = schedule.spawn_times[i];
        planes[i].is_missed = (i == schedule.missed_index);
    }

    double separation_min = std::numeric_limits<double>::infinity();
    bool separation_seen = false;
    bool done = false;

    const auto flow_eta = [&](double now, bool include_missed) {
        std::vector<ars::FlowEntry> flow;
        for (std::size_t i = 0; i < planes.size(); ++i) {
            auto& p = planes[i];
            if (p.landed)
                continue;
            if (p.is_missed && !include_missed)
                continue;
            const std::string id = "AC" + std::to_string(i);
            if (p.spawned)
                flow.push_back({id, p.route.eta(p.state.pose, p.state.target)});
            else
                flow.push_back({id, (p.spawn_time - now) + nominal_total_eta});
        }
        std::sort(flow.begin(), flow.end(),
                  [](const auto& a, const auto& b) { return a.eta_s < b.eta_s; });
        return flow;
    };

    const auto go_conventional = [&](Plane& plane) {
        assign_route(plane, ars::activate_conventional(config.approach), 0, turn_rate, profile, nominal);
    };

    for (double t = 0.0; t <= config.run_cap_s && !done; t += 1.0) {
        for (std::size_t i = 0; i < planes.size(); ++i) {
            auto& plane = planes[i];
            if (!plane.spawned && plane.spawn_time <= t) {
                plane.state = dynamics::spawn(config.approach, "AC" + std::to_string(i),
                                              plane.is_missed ? dynamics::Role::Missed
                                                              : dynamics::Role::Normal);
                assign_route(plane, nominal, 1, turn_rate, profile, nominal);
                plane.spawned = true;
            }
            if (!plane.spawned || plane.landed)
                continue;

            const auto result = dynamics::step(plane.state, plane.route.waypoints,
                                               config.limits, 1.0);
            const double thrust = performance::instant_thrust(config.perf, result.sample);
            const double flow = performance::instant_fuel(config.perf, result.sample, thrust);
            performance::aggregate_step(plane.state.ledger, flow, 1.0);

            if (config.record_trace || plane.is_missed) {
                report.trace.push_back({t, plane.state.id, plane.state.pose.x,
                                        plane.state.pose.y, plane.state.z,
                                        result.sample.speed_ms, result.sample.accel_ms2,
                                        result.sample.path_angle_rad,
                                        result.sample.climb_rate_ms, thrust, flow,
                                        plane.state.ledger.aggregated_kg});
            }

            for (const auto& event : result.events) {
                if (event.kind != dynamics::Event::Kind::Landed)
                    continue;
                if (plane.is_missed && !plane.went_around) {
                    // First MAPt crossing: go around.
                    plane.went_around = true;
                    report.goaround_time_s = t;
                    plane.fa_at_goaround = plane.state.ledger.aggregated_kg;
                    if (config.procedure == Procedure::Conventional) {
                        go_conventional(plane);
                        break;
                    }
                    const auto flow_now = flow_eta(t, false);
                    const auto gap =
                        ars::find_gap(flow_now, config.threshold_s,
                                      nominal_total_eta + config.upstream_allowance_s,
                                      config.spacing_s);
                    bool planned = false;
                    if (gap) {
                        try {
                            // Fly the planned path as a chain of closely spaced
                            // steering points; chasing only the three plan fixes
                            // would cut the arcs short.
                            const auto build_seq = [&](const ars::ReinjectionPlan& plan) {
                                std::vector<Waypoint> seq;
                                const double total = plan.path.total_length();
                                const double spacing =
                                    std::max(600.0, 2.0 * config.limits.capture_radius_m);
                                const int np = std::max(
                                    1, static_cast<int>(std::ceil(total / spacing)));
                                for (int k = 1; k < np; ++k) {
                                    const double s = total * k / np;
                                    const auto pose = geometry::dubins_sample(plan.path, s);
                                    Waypoint wp;
                                    wp.name = "ARS/P" + std::to_string(k);
                                    wp.x = pose.x;
                                    wp.y = pose.y;
                                    wp.z = plane.state.z +
                                           (s / total) *
                                               (plan.reinjection_point.z - plane.state.z);
                                    // climb ceiling while off the published procedure
                                    wp.z = std::min(wp.z, config.goaround_altitude_m);
                                    wp.speed = plan.reinjection_point.speed;
                                    wp.fly_heading = pose.psi;
                                    seq.push_back(wp);
                                }
                                seq.push_back(plan.reinjection_point);
                                for (std::size_t k = plan.resume_leg; k < nominal.size(); ++k)
                                    seq.push_back(nominal[k]);
                                return seq;
                            };
                            // Landing time of a candidate plan, flown with the
                            // live guidance from the current state.
                            const auto rehearse = [&](const std::vector<Waypoint>& seq) {
                                auto st = plane.state;
                                st.target = 0;
                                for (int tick = 0; tick < 20000; ++tick) {
                                    const auto res =
                                        dynamics::step(st, seq, config.limits, 1.0);
                                    for (const auto& ev : res.events)
                                        if (ev.kind == dynamics::Event::Kind::Landed)
                                            return static_cast<double>(tick + 1);
                                }
                                throw ars::UnreachableGap("planned path never lands");
                            };
                            // The interception solve models the maneuver at the
                            // ghost's speed on chain time; flown with real
                            // acceleration and fly-by guidance the plane would
                            // miss the slot by tens of seconds. Rehearse each
                            // candidate and re-solve with a shifted ghost until
                            // the rehearsed landing matches the slot.
                            ars::Gap adjusted = *gap;
                            // aim slightly behind the slot: tick quantization
                            // and the short ETA wobble while settling onto the
                            // resume leg would otherwise eat into the leader
                            // gap, and the follower side has at least the gap
                            // eligibility margin to give
                            const double slot_eta = gap->ghost_eta_s + 2.0;
                            auto plan = ars::solve_reinjection(plane.state, adjusted,
                                                               config.approach, plan_radius);
                            auto seq = build_seq(plan);
                            for (int pass = 0; pass < 8; ++pass) {
                                const double bias = rehearse(seq) - slot_eta;
                                if (std::fabs(bias) < 1.01)
                                    break;
                                adjusted.ghost_eta_s -= bias;
                                if (adjusted.ghost_eta_s <= 1.0)
                                    throw ars::UnreachableGap(
                                        "slot is behind the aircraft in flown time");
                                plan = ars::solve_reinjection(plane.state, adjusted,
                                                              config.approach, plan_radius);
                                seq = build_seq(plan);
                            }
                            assign_route(plane, std::move(seq), 0, turn_rate, profile, nominal);
                            plane.plan_active = true;
                            report.plan = std::move(plan);
                            planned = true;
                        } catch (const ars::UnreachableGap&) {
                        }
                    }
                    if (!planned) {
                        go_conventional(plane);
                        report.outcome = Outcome::FallbackConventional;
                    }
                    break;
                }
                plane.landed = true;
                if (plane.is_missed) {
                    report.landing_time_s = t;
                    report.maneuver_time_s = t - report.goaround_time_s;
                    report.maneuver_fuel_kg =
                        plane.state.ledger.aggregated_kg - plane.fa_at_goaround;
                    if (report.outcome != Outcome::FallbackConventional)
                        report.outcome = Outcome::Landed;
                    done = true;
                }
            }
        }

        // Separation over the nominal flow, including the reinjected aircraft
        // once it is re-established on the published procedure. While it rides
        // the maneuver legs it is laterally clear of the stream and its ETA
        // sweeps backwards across the aircraft it leapfrogs, so the in-trail
        // ETA gap is not a separation measure there.
        const auto& missed_plane = planes[schedule.missed_index];
        const bool include_missed =
            missed_plane.plan_active && !missed_plane.landed &&
            missed_plane.state.target < missed_plane.route.waypoints.size() &&
            !missed_plane.route.waypoints[missed_plane.state.target].fly_heading;
        const auto sep = separation_monitor(flow_eta(t, include_missed));
        if (sep && (config.procedure == Procedure::Conventional || include_missed)) {
            separation_min = std::min(separation_min, *sep);
            separation_seen = true;
        }
    }

    if (separation_seen)
        report.separation_min_s = separation_min;
    return report;
}

std::vector<SweepCell> sweep(const ScenarioConfig& base, const std::vector<double>& spacings,
                             const std::vector<int>& distances, int jobs) {
    if (spacings.empty() || distances.empty())
        throw ValidationError("sweep", "spacing and distance lists must be nonempty");

    std::vector<SweepCell> cells(spacings.size() * distances.size());
    const auto run_cell = [&](std::size_t idx) {
        const double spacing = spacings[idx / distances.size()];
        const int distance = distances[idx % distances.size()];
        SweepCell& cell = cells[idx];
        cell.spacing_s = spacing;
        cell.distance_to_gap = distance;
        try {
            ScenarioConfig cfg = base;
            cfg.spacing_s = spacing;
            cfg.distance_to_gap = distance;
            cfg.record_trace = false;

            cfg.procedure = Procedure::Conventional;
            const auto conv = run(cfg);
            cfg.procedure = Procedure::Ars;
            const auto ars_run = run(cfg);

            cell.t_conv_s = conv.maneuver_time_s;
            cell.f_conv_kg = conv.maneuver_fuel_kg;
            cell.t_ars_s = ars_run.maneuver_time_s;
            cell.f_ars_kg = ars_run.maneuver_fuel_kg;
            cell.ars_outcome = ars_run.outcome;
            if (conv.outcome == Outcome::Timeout || ars_run.outcome == Outcome::Timeout ||
                !(conv.maneuver_time_s > 0.0) || !(conv.maneuver_fuel_kg > 0.0)) {
                cell.failed = true;
                cell.error = "run did not complete";
                return;
            }
            cell.time_saving = 1.0 - cell.t_ars_s / cell.t_conv_s;
            cell.fuel_saving = 1.0 - cell.f_ars_kg / cell.f_conv_kg;
        } catch (const std::exception& e) {
            cell.failed = true;
            cell.error = e.what();
        }
    };

    if (jobs <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            run_cell(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::future<void>> workers;
        for (int w = 0; w < jobs; ++w)
            workers.push_back(std::async(std::launch::async, [&] {
                for (std::size_t i = next++; i < cells.size(); i = next++)
                    run_cell(i);
            }));
        for (auto& f : workers)
            f.get();
    }
    return cells;
}

// --- serialization ---

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

} // namespace

std::string trace_to_csv(const std::vector<TraceRow>& rows) {
    std::ostringstream out;
    out << "t_s,aircraft_id,x_m,y_m,z_m,V_ms,Vdot_ms2,gamma_rad,hdot_ms,thrust_N,F_kgmin,Fa_kg\n";
    for (const auto& r : rows) {
        out << fmt(r.t_s) << ',' << r.aircraft_id << ',' << fmt(r.x_m) << ',' << fmt(r.y_m)
            << ',' << fmt(r.z_m) << ',' << fmt(r.v_ms) << ',' << fmt(r.vdot_ms2) << ','
            << fmt(r.gamma_rad) << ',' << fmt(r.hdot_ms) << ',' << fmt(r.thrust_n) << ','
            << fmt(r.flow_kgmin) << ',' << fmt(r.aggregated_kg) << '\n';
    }
    return out.str();
}

std::string sweep_to_csv(const std::vector<SweepCell>& cells) {
    std::ostringstream out;
    out << "T_s_s,distance_to_gap,t_conv_s,t_ars_s,f_conv_kg,f_ars_kg,time_saving,fuel_saving,"
           "ars_outcome\n";
    for (const auto& c : cells) {
        out << fmt(c.spacing_s) << ',' << c.distance_to_gap << ',' << fmt(c.t_conv_s) << ','
            << fmt(c.t_ars_s) << ',' << fmt(c.f_conv_kg) << ',' << fmt(c.f_ars_kg) << ','
            << fmt(c.time_saving) << ',' << fmt(c.fuel_saving) << ','
            << (c.failed ? "failed" : to_string(c.ars_outcome)) << '\n';
    }
    return out.str();
}

std::string report_to_json(const RunReport& report, const ScenarioConfig& config) {
    json j;
    j["procedure"] = std::string(to_string(report.procedure));
    j["outcome"] = std::string(to_string(report.outcome));
    j["T_s"] = config.spacing_s;
    j["T_1"] = config.threshold_s;
    j["distance_to_gap"] = config.distance_to_gap;
    j["maneuver_time_s"] = report.maneuver_time_s;
    j["maneuver_fuel_kg"] = report.maneuver_fuel_kg;
    j["goaround_time_s"] = report.goaround_time_s;
    j["landing_time_s"] = report.landing_time_s;
    j["separation_min_s"] =
        report.separation_min_s ? json(*report.separation_min_s) : json();
    if (report.plan) {
        j["plan"] = {{"t_star_s", report.plan->t_star_s},
                     {"ghost_eta_s", report.plan->gap.ghost_eta_s},
                     {"leader", report.plan->gap.leader_id}};
    }
    return j.dump(2) + "\n";
}

namespace {

std::string read_file(const std::filesystem::path& path, const std::string& where) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError(where, "cannot read file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double number_or(const json& j, const std::string& key, double fallback,
                 const std::string& where) {
    if (!j.contains(key))
        return fallback;
    if (!j.at(key).is_number())
        throw ValidationError(where + "." + key, "must be a number");
    return j.at(key).get<double>();
}

int int_or(const json& j, const std::string& key, int fallback, const std::string& where) {
    if (!j.contains(key))
        return fallback;
    if (!j.at(key).is_number_integer())
        throw ValidationError(where + "." + key, "must be an integer");
    return j.at(key).get<int>();
}

} // namespace

ScenarioConfig load_scenario(const std::string& json_text, const std::string& base_dir) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError("<scenario>", e.what());
    }

    ScenarioConfig cfg;
    const std::filesystem::path base(base_dir);

    if (!j.contains("chart"))
        throw ValidationError("chart", "missing field");
    const json& ch = j.at("chart");
    if (ch.is_string() && ch.get<std::string>() == "builtin:malaga-rwy13")
        cfg.approach = chart::builtin_malaga_rwy13();
    else if (ch.is_string())
        cfg.approach = chart::load_chart(read_file(base / ch.get<std::string>(), "chart"));
    else
        throw ValidationError("chart", "expected \"builtin:malaga-rwy13\" or a file path");

    if (!j.contains("performance"))
        throw ValidationError("performance", "missing field");
    const json& pf = j.at("performance");
    if (pf.is_string())
        cfg.perf = performance::load_performance(
            read_file(base / pf.get<std::string>(), "performance"));
    else if (pf.is_object())
        cfg.perf = performance::load_performance(pf.dump());
    else
        throw ValidationError("performance", "expected a file path or an inline object");

    const json eng = j.contains("engine") ? j.at("engine") : json::object();
    cfg.spacing_s = number_or(eng, "T_s", cfg.spacing_s, "engine");
    cfg.threshold_s = number_or(eng, "T_1", cfg.threshold_s, "engine");
    cfg.gap_period = int_or(eng, "gap_period", cfg.gap_period, "engine");
    cfg.distance_to_gap = int_or(eng, "distance_to_gap", cfg.distance_to_gap, "engine");
    cfg.lead_aircraft = int_or(eng, "lead_aircraft", cfg.lead_aircraft, "engine");
    cfg.trail_aircraft = int_or(eng, "trail_aircraft", cfg.trail_aircraft, "engine");
    cfg.gap_margin_s = number_or(eng, "gap_margin_s", cfg.gap_margin_s, "engine");
    cfg.goaround_altitude_m =
        number_or(eng, "goaround_altitude_m", cfg.goaround_altitude_m, "engine");
    cfg.upstream_allowance_s =
        number_or(eng, "upstream_allowance_s", cfg.upstream_allowance_s, "engine");
    cfg.run_cap_s = number_or(eng, "run_cap_s", cfg.run_cap_s, "engine");
    cfg.seed = static_cast<unsigned>(int_or(eng, "seed", 0, "engine"));
    if (eng.contains("procedure")) {
        const std::string p = eng.at("procedure").is_string()
                                  ? eng.at("procedure").get<std::string>()
                                  : "";
        if (p == "ars")
            cfg.procedure = Procedure::Ars;
        else if (p == "conventional")
            cfg.procedure = Procedure::Conventional;
        else
            throw ValidationError("engine.procedure", "expected \"ars\" or \"conventional\"");
    }

    const json lim = j.contains("limits") ? j.at("limits") : json::object();
    cfg.limits.turn_rate_rads =
        number_or(lim, "turn_rate_deg_s", 3.0, "limits") * geometry::kPi / 180.0;
    cfg.limits.accel_ms2 = number_or(lim, "accel_ms2", cfg.limits.accel_ms2, "limits");
    cfg.limits.climb_rate_ms = number_or(lim, "climb_ms", cfg.limits.climb_rate_ms, "limits");
    cfg.limits.descent_rate_ms =
        number_or(lim, "descent_ms", cfg.limits.descent_rate_ms, "limits");
    cfg.limits.capture_radius_m =
        number_or(lim, "capture_radius_m", cfg.limits.capture_radius_m, "limits");

    cfg.validate();
    return cfg;
}

} // namespace arsim::engine
