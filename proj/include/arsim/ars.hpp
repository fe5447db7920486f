#pragma once

#include "arsim/chart.hpp"
#include "arsim/dynamics.hpp"
#include "arsim/geometry.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace arsim::ars {

/// No interception fixed point exists inside the search bracket; callers fall
/// back to the conventional missed-approach procedure.
class UnreachableGap : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct FlowEntry {
    std::string id;
    double eta_s = 0.0; // time to the runway along the active sequence
};

struct Gap {
    std::string leader_id;                 // empty when the flow is empty
    std::optional<std::string> follower_id; // none for the tail gap
    double leader_eta_s = 0.0;
    double follower_eta_s = 0.0; // meaningful only when follower_id is set
    double ghost_eta_s = 0.0;
};

/// Scan an ETA-ordered flow for a reinjection slot: consecutive pairs more
/// than 2*T_s apart whose ghost slot (T_s behind the leader) falls inside
/// [window_start, window_end]; the slot behind the last aircraft always
/// qualifies if it fits the window. Returns the eligible gap with the
/// earliest ghost ETA, or nullopt.
std::optional<Gap> find_gap(const std::vector<FlowEntry>& flow, double window_start_s,
                            double window_end_s, double spacing_s);

/// Motion model for the virtual aircraft occupying a gap: flies the nominal
/// sequence at published speeds; before reaching the entry fix it is carried
/// upstream along the entry bearing.
class GhostTrack {
  public:
    GhostTrack(const chart::ApproachChart& chart, double ghost_eta_s,
               double turn_rate = geometry::kStandardTurnRate);

    struct State {
        geometry::Pose2D pose;
        double z = 0.0;
        double speed = 0.0;
        std::size_t nominal_leg = 0; // index of the nominal fix the ghost flies toward
    };

    /// Ghost state dt seconds after plan creation; dt must not exceed the
    /// ghost's landing time.
    State predict(double dt_s) const;

    double ghost_eta() const { return ghost_eta_; }
    double chain_total_time() const { return chain_.total_time(); }

  private:
    geometry::FlightChain chain_;
    double ghost_eta_;
    double entry_z_;
    double entry_speed_;
};

struct ReinjectionPlan {
    Gap gap;
    double t_star_s = 0.0; // interception time
    std::vector<chart::Waypoint> waypoints; // the three auxiliary fixes
    chart::Waypoint reinjection_point;      // merge fix, named "ARS/RP"
    std::size_t resume_leg = 0; // nominal index the aircraft flies toward after the merge
    geometry::DubinsPath path; // the reference interception path
};

/// Fixed-point interception solve: find t* with dubins-travel-time(t*) == t*
/// by bisection (0.1 s tolerance), then extract the three auxiliary
/// waypoints from the solution path (first-arc end, straight midpoint,
/// final-arc start). Altitudes interpolate linearly along the path from the
/// go-around aircraft's altitude to the ghost's altitude at the merge.
ReinjectionPlan solve_reinjection(const dynamics::AircraftState& missed, const Gap& gap,
                                  const chart::ApproachChart& chart, double radius);

/// The conventional baseline: missed route, then the nominal sequence from
/// the rejoin fix to the runway.
std::vector<chart::Waypoint> activate_conventional(const chart::ApproachChart& chart);

std::string plan_to_json(const ReinjectionPlan& plan);

} // namespace arsim::ars
