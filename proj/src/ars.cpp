#include "arsim/ars.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace arsim::ars {

using geometry::Pose2D;

std::optional<Gap> find_gap(const std::vector<FlowEntry>& flow, double window_start_s,
                            double window_end_s, double spacing_s) {
    if (!(spacing_s > 0.0))
        throw std::invalid_argument("find_gap: spacing must be positive");

    std::optional<Gap> best;
    auto consider = [&](const Gap& g) {
        if (g.ghost_eta_s < window_start_s || g.ghost_eta_s > window_end_s)
            return;
        if (!best || g.ghost_eta_s < best->ghost_eta_s)
            best = g;
    };

    for (std::size_t i = 0; i + 1 < flow.size(); ++i) {
        const double width = flow[i + 1].eta_s - flow[i].eta_s;
        if (width > 2.0 * spacing_s) {
            Gap g;
            g.leader_id = flow[i].id;
            g.follower_id = flow[i + 1].id;
            g.leader_eta_s = flow[i].eta_s;
            g.follower_eta_s = flow[i + 1].eta_s;
            g.ghost_eta_s = flow[i].eta_s + spacing_s;
            consider(g);
        }
    }

    // Tail slot behind the whole flow.
    Gap tail;
    if (!flow.empty()) {
        tail.leader_id = flow.back().id;
        tail.leader_eta_s = flow.back().eta_s;
        tail.ghost_eta_s = std::max(flow.back().eta_s + spacing_s, window_start_s);
    } else {
        tail.ghost_eta_s = window_start_s;
    }
    consider(tail);

    return best;
}

GhostTrack::GhostTrack(const chart::ApproachChart& chart, double ghost_eta_s, double turn_rate)
    : chain_([&] {
          const auto seq = chart.nominal_sequence();
          if (seq.waypoints.size() < 2)
              throw chart::ValidationError("nominal", "needs at least two waypoints");
          const auto& entry = seq.waypoints.front();
          const auto& next = seq.waypoints[1];
          const Pose2D start{entry.x, entry.y,
                             geometry::normalize_angle(
                                 std::atan2(next.y - entry.y, next.x - entry.x))};
          std::vector<geometry::Leg> legs;
          for (std::size_t i = 1; i < seq.waypoints.size(); ++i) {
              const auto& wp = seq.waypoints[i];
              legs.push_back({wp.x, wp.y, wp.z, wp.speed});
          }
          return geometry::FlightChain(start, entry.z, std::move(legs), turn_rate);
      }()),
      ghost_eta_(ghost_eta_s) {
    const auto seq = chart.nominal_sequence();
    entry_z_ = seq.waypoints.front().z;
    entry_speed_ = seq.waypoints.front().speed;
}

GhostTrack::State GhostTrack::predict(double dt_s) const {
    const double remaining = ghost_eta_ - dt_s;
    if (dt_s < 0.0 || remaining < -1e-9)
        throw std::out_of_range("GhostTrack::predict: dt beyond the ghost's landing time");

    if (remaining <= chain_.total_time()) {
        const auto s = chain_.sample_remaining(std::max(remaining, 0.0));
        return State{s.pose, s.z, s.speed, s.leg + 1}; // chain legs start at nominal[1]
    }

    // Still upstream of the entry fix: carried in along the entry bearing.
    const double extra_s = (remaining - chain_.total_time()) * entry_speed_;
    const auto start = chain_.sample_time(0.0);
    State out;
    out.pose = {start.pose.x - extra_s * std::cos(start.pose.psi),
                start.pose.y - extra_s * std::sin(start.pose.psi), start.pose.psi};
    out.z = entry_z_;
    out.speed = entry_speed_;
    out.nominal_leg = 0;
    return out;
}

namespace {

constexpr double kFixedPointToleranceS = 0.1;
constexpr int kBracketSamples = 256;

double travel_time(const Pose2D& from, const GhostTrack::State& ghost, double radius) {
    const auto path = geometry::dubins_shortest(from, ghost.pose, radius);
    return path.total_length() / ghost.speed;
}

} // namespace

ReinjectionPlan solve_reinjection(const dynamics::AircraftState& missed, const Gap& gap,
                                  const chart::ApproachChart& chart, double radius) {
    if (!(gap.ghost_eta_s > 0.0))
        throw std::invalid_argument("solve_reinjection: gap ghost ETA must be positive");

    const GhostTrack track(chart, gap.ghost_eta_s);
    const auto residual = [&](double t) {
        return travel_time(missed.pose, track.predict(t), radius) - t;
    };

    // residual(0) > 0 always; bracket the first sign change, then bisect.
    double lo = 0.0;
    double hi = -1.0;
    double prev_t = 0.0;
    double prev_f = residual(0.0);
    for (int i = 1; i <= kBracketSamples; ++i) {
        const double t = gap.ghost_eta_s * static_cast<double>(i) / kBracketSamples;
        const double f = residual(t);
        if (prev_f > 0.0 && f <= 0.0) {
            lo = prev_t;
            hi = t;
            break;
        }
        prev_t = t;
        prev_f = f;
    }
    if (hi < 0.0)
        throw UnreachableGap("no interception fixed point before the ghost lands");

    for (int i = 0; i < 64 && (hi - lo) > 1e-4; ++i) {
        const double mid = 0.5 * (lo + hi);
        (residual(mid) > 0.0 ? lo : hi) = mid;
    }
    const double t_star = 0.5 * (lo + hi);
    if (std::fabs(residual(t_star)) > kFixedPointToleranceS)
        throw UnreachableGap("fixed-point residual above tolerance");

    const auto ghost = track.predict(t_star);

    ReinjectionPlan plan;
    plan.gap = gap;
    plan.t_star_s = t_star;
    plan.resume_leg = ghost.nominal_leg;
    plan.path = geometry::dubins_shortest(missed.pose, ghost.pose, radius);

    const double total = plan.path.total_length();
    const double s1 = plan.path.lengths[0];
    const double s3 = plan.path.lengths[0] + plan.path.lengths[1];
    const double s2 = 0.5 * (s1 + s3);
    const auto aux = [&](const std::string& name, double s) {
        const auto pose = geometry::dubins_sample(plan.path, s);
        const double frac = total > 0.0 ? s / total : 1.0;
        chart::Waypoint wp;
        wp.name = name;
        wp.x = pose.x;
        wp.y = pose.y;
        wp.z = missed.z + frac * (ghost.z - missed.z);
        wp.speed = ghost.speed;
        wp.fly_heading = pose.psi;
        return wp;
    };
    plan.waypoints = {aux("ARS1", s1), aux("ARS2", s2), aux("ARS3", s3)};
    plan.reinjection_point = aux("ARS/RP", total);
    return plan;
}

std::vector<chart::Waypoint> activate_conventional(const chart::ApproachChart& chart) {
    return chart.conventional_route().waypoints;
}

std::string plan_to_json(const ReinjectionPlan& plan) {
    nlohmann::json j;
    j["gap"] = {{"leader", plan.gap.leader_id},
                {"follower", plan.gap.follower_id ? nlohmann::json(*plan.gap.follower_id)
                                                  : nlohmann::json()},
                {"ghost_eta", plan.gap.ghost_eta_s}};
    j["t_star"] = plan.t_star_s;
    j["waypoints"] = nlohmann::json::array();
    for (const auto& wp : plan.waypoints)
        j["waypoints"].push_back(
            {{"name", wp.name}, {"x", wp.x}, {"y", wp.y}, {"z", wp.z}, {"speed", wp.speed}});
    j["reinjection_point"] = {{"x", plan.reinjection_point.x},
                              {"y", plan.reinjection_point.y},
                              {"z", plan.reinjection_point.z},
                              {"t", plan.t_star_s}};
    return j.dump(2) + "\n";
}

} // namespace arsim::ars
