#include "arsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace arsim::dynamics {

using chart::ValidationError;
using geometry::normalize_angle;

void GuidanceLimits::validate() const {
    if (!(turn_rate_rads > 0.0))
        throw ValidationError("limits.turn_rate", "must be > 0");
    if (!(accel_ms2 > 0.0))
        throw ValidationError("limits.accel_ms2", "must be > 0");
    if (!(climb_rate_ms > 0.0))
        throw ValidationError("limits.climb_ms", "must be > 0");
    if (!(descent_rate_ms > 0.0))
        throw ValidationError("limits.descent_ms", "must be > 0");
    if (!(capture_radius_m > 0.0))
        throw ValidationError("limits.capture_radius_m", "must be > 0");
}

namespace {

double wrapped_delta(double target, double current) {
    double d = std::fmod(target - current, geometry::kTwoPi);
    if (d > geometry::kPi)
        d -= geometry::kTwoPi;
    if (d < -geometry::kPi)
        d += geometry::kTwoPi;
    return d;
}

} // namespace

StepResult step(AircraftState& state, const std::vector<chart::Waypoint>& sequence,
                const GuidanceLimits& limits, double dt) {
    if (sequence.empty())
        throw std::invalid_argument("dynamics::step: empty active sequence");
    if (!(dt > 0.0))
        throw std::invalid_argument("dynamics::step: dt must be positive");
    if (state.target >= sequence.size())
        throw std::invalid_argument("dynamics::step: target index out of range");

    const chart::Waypoint& wp = sequence[state.target];

    // Heading: turn toward the target bearing at the turn-rate limit.
    const double dx = wp.x - state.pose.x;
    const double dy = wp.y - state.pose.y;
    const double dist = std::hypot(dx, dy);
    if (dist > 1e-9) {
        const double bearing = std::atan2(dy, dx);
        const double dpsi = wrapped_delta(bearing, state.pose.psi);
        const double max_dpsi = limits.turn_rate_rads * dt;
        state.pose.psi = normalize_angle(state.pose.psi + std::clamp(dpsi, -max_dpsi, max_dpsi));
    }

    // Horizontal speed toward the commanded leg speed.
    const double dv = std::clamp(wp.speed - state.speed_ms, -limits.accel_ms2 * dt,
                                 limits.accel_ms2 * dt);
    state.speed_ms += dv;

    // Vertical rate: co-reach the target altitude with the horizontal
    // arrival when feasible, else ride the rate limit. Expedited legs climb
    // or descend at the limit regardless.
    const double dz = wp.z - state.z;
    double hdot = 0.0;
    if (std::fabs(dz) > 1e-12) {
        if (wp.expedite_altitude) {
            hdot = dz > 0.0 ? limits.climb_rate_ms : -limits.descent_rate_ms;
        } else {
            const double tgo = dist / std::max(state.speed_ms, 1.0);
            hdot = tgo > dt ? dz / tgo : dz / dt;
            hdot = std::clamp(hdot, -limits.descent_rate_ms, limits.climb_rate_ms);
        }
        // don't overshoot the target altitude
        if (std::fabs(hdot * dt) > std::fabs(dz))
            hdot = dz / dt;
    }

    state.pose.x += state.speed_ms * std::cos(state.pose.psi) * dt;
    state.pose.y += state.speed_ms * std::sin(state.pose.psi) * dt;
    state.z += hdot * dt;

    StepResult result;
    const double total_speed = std::hypot(state.speed_ms, hdot);
    result.sample.speed_ms = total_speed;
    result.sample.accel_ms2 =
        state.prev_total_speed >= 0.0 ? (total_speed - state.prev_total_speed) / dt : 0.0;
    result.sample.path_angle_rad = std::asin(hdot / total_speed);
    result.sample.altitude_m = state.z;
    result.sample.climb_rate_ms = hdot;
    state.prev_total_speed = total_speed;

    // Fly-by anticipation: when the route bends at this fix, start the turn
    // at the inscribed-arc lead distance r*tan(delta/2) so the flown track
    // cuts the corner like the Dubins reference. Lead capped at a 120 degree
    // corner; the final fix always uses the plain capture radius.
    double capture = limits.capture_radius_m;
    if (state.target + 1 < sequence.size() && dist > 1e-9) {
        const chart::Waypoint& next = sequence[state.target + 1];
        const double ox = next.x - wp.x;
        const double oy = next.y - wp.y;
        if (std::hypot(ox, oy) > 1e-9) {
            const double inbound = std::atan2(dy, dx);
            const double outbound = std::atan2(oy, ox);
            double half = std::fabs(wrapped_delta(outbound, inbound)) / 2.0;
            half = std::min(half, geometry::kPi / 3.0);
            const double radius = state.speed_ms / limits.turn_rate_rads;
            capture = std::max(capture, radius * std::tan(half));
        }
    }

    const double new_dist = std::hypot(wp.x - state.pose.x, wp.y - state.pose.y);
    if (new_dist < capture) {
        result.events.push_back({Event::Kind::Captured, wp.name});
        if (state.target + 1 < sequence.size())
            ++state.target;
        else
            result.events.push_back({Event::Kind::Landed, wp.name});
    }
    return result;
}

AircraftState spawn(const chart::ApproachChart& chart, const std::string& id, Role role) {
    const auto seq = chart.nominal_sequence();
    if (seq.waypoints.size() < 2)
        throw ValidationError("nominal", "needs at least two waypoints to spawn");
    const auto& entry = seq.waypoints.front();
    const auto& next = seq.waypoints[1];

    AircraftState state;
    state.id = id;
    state.role = role;
    state.pose = {entry.x, entry.y,
                  normalize_angle(std::atan2(next.y - entry.y, next.x - entry.x))};
    state.z = entry.z;
    state.speed_ms = entry.speed;
    state.target = 1;
    return state;
}

} // namespace arsim::dynamics
