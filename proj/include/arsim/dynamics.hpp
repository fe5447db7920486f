#pragma once

#include "arsim/chart.hpp"
#include "arsim/geometry.hpp"
#include "arsim/performance.hpp"

#include <string>
#include <vector>

namespace arsim::dynamics {

enum class Role { Normal, Missed, Ghost };

struct GuidanceLimits {
    double turn_rate_rads = geometry::kStandardTurnRate;
    double accel_ms2 = 0.6;
    double climb_rate_ms = 12.0;
    double descent_rate_ms = 8.0;
    double capture_radius_m = 300.0;

    void validate() const; // throws chart::ValidationError
};

struct AircraftState {
    std::string id;
    Role role = Role::Normal;
    geometry::Pose2D pose;
    double z = 0.0;
    double speed_ms = 0.0;      // horizontal speed
    std::size_t target = 0;     // index into the active sequence
    performance::FuelLedger ledger;
    double prev_total_speed = -1.0; // previous tick's V, for Vdot; <0 before first step
};

struct Event {
    enum class Kind { Captured, Landed } kind;
    std::string waypoint;
};

struct StepResult {
    performance::FlightSample sample;
    std::vector<Event> events;
};

/// One guidance tick: turn toward the target fix, trim speed and altitude
/// under the rate limits, advance the pose, and report captures. Capturing
/// the last waypoint of the sequence also emits a Landed event.
StepResult step(AircraftState& state, const std::vector<chart::Waypoint>& sequence,
                const GuidanceLimits& limits, double dt = 1.0);

/// Fresh arrival at the chart entry fix, heading at the next one.
AircraftState spawn(const chart::ApproachChart& chart, const std::string& id,
                    Role role = Role::Normal);

} // namespace arsim::dynamics
