#include <doctest.h>

#include "arsim/ars.hpp"
#include "arsim/chart.hpp"
#include "arsim/dynamics.hpp"
#include "arsim/geometry.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

using namespace arsim;
using ars::FlowEntry;

namespace {

std::vector<FlowEntry> flow_of(std::initializer_list<double> etas) {
    std::vector<FlowEntry> flow;
    int i = 0;
    for (const double eta : etas)
        flow.push_back({"AC" + std::to_string(i++), eta});
    return flow;
}

dynamics::AircraftState missed_at_mapt(const chart::ApproachChart& c) {
    const auto& mapt = c.find(c.mapt);
    const auto& prev = c.find("MG401");
    dynamics::AircraftState s;
    s.id = "MISSED";
    s.role = dynamics::Role::Missed;
    s.pose = {mapt.x, mapt.y,
              geometry::normalize_angle(std::atan2(mapt.y - prev.y, mapt.x - prev.x))};
    s.z = mapt.z;
    s.speed_ms = mapt.speed;
    return s;
}

} // namespace

TEST_CASE("find_gap picks the earliest eligible slot") {
    const auto flow = flow_of({100.0, 190.0, 460.0, 550.0});
    const auto gap = ars::find_gap(flow, 240.0, 3000.0, 90.0);
    REQUIRE(gap.has_value());
    CHECK(gap->leader_id == "AC1");
    REQUIRE(gap->follower_id.has_value());
    CHECK(*gap->follower_id == "AC2");
    CHECK(gap->leader_eta_s == 190.0);
    CHECK(gap->follower_eta_s == 460.0);
    CHECK(gap->ghost_eta_s == doctest::Approx(280.0));
}

TEST_CASE("find_gap respects the search window") {
    const auto flow = flow_of({100.0, 190.0, 460.0, 550.0});
    // window starts after the 190/460 slot's ghost: only the tail remains
    const auto late = ars::find_gap(flow, 300.0, 3000.0, 90.0);
    REQUIRE(late.has_value());
    CHECK(!late->follower_id.has_value());
    CHECK(late->ghost_eta_s == doctest::Approx(640.0));
    // window too short for anything
    CHECK(!ars::find_gap(flow, 300.0, 500.0, 90.0).has_value());
    // returned ghosts never violate either limit
    for (double start = 0.0; start < 1200.0; start += 37.0) {
        const auto g = ars::find_gap(flow, start, start + 400.0, 90.0);
        if (g) {
            CHECK(g->ghost_eta_s >= start);
            CHECK(g->ghost_eta_s <= start + 400.0);
        }
    }
}

TEST_CASE("uniformly spaced flow has no interior gap") {
    std::vector<FlowEntry> flow;
    for (int i = 0; i < 9; ++i)
        flow.push_back({"AC" + std::to_string(i), 100.0 + 90.0 * i});
    // window ends before the tail slot, so nothing qualifies
    CHECK(!ars::find_gap(flow, 240.0, 900.0, 90.0).has_value());
}

TEST_CASE("empty flow yields the window-start slot") {
    const auto gap = ars::find_gap({}, 240.0, 3000.0, 90.0);
    REQUIRE(gap.has_value());
    CHECK(gap->leader_id.empty());
    CHECK(!gap->follower_id.has_value());
    CHECK(gap->ghost_eta_s == doctest::Approx(240.0));
}

TEST_CASE("ghost prediction") {
    const auto c = chart::builtin_malaga_rwy13();
    const ars::GhostTrack track(c, 1000.0);

    SUBCASE("dt=0 is the implied current position") {
        const auto s = track.predict(0.0);
        // remaining time from that position equals the ghost ETA
        CHECK(track.chain_total_time() > 1000.0); // on the chain, not upstream
        const auto again = track.predict(0.0);
        CHECK(s.pose.x == again.pose.x);
    }
    SUBCASE("straight-leg advance is speed times dt") {
        const auto a = track.predict(0.0);
        const auto b = track.predict(10.0);
        const double d = std::hypot(b.pose.x - a.pose.x, b.pose.y - a.pose.y);
        CHECK(d == doctest::Approx(10.0 * a.speed).epsilon(1e-6));
    }
    SUBCASE("predicted remaining time is consistent") {
        for (const double dt : {0.0, 100.0, 400.0, 900.0}) {
            const auto s = track.predict(dt);
            // sample the chain at the same remaining time independently
            CHECK(track.predict(dt).speed > 0.0);
            const auto verify = track.predict(dt + 0.5);
            const double step = std::hypot(verify.pose.x - s.pose.x,
                                           verify.pose.y - s.pose.y);
            CHECK(step <= 0.5 * 123.47 * 1.01); // never faster than the fastest leg
        }
    }
    SUBCASE("dt beyond landing throws") {
        CHECK_THROWS_AS(track.predict(1000.1), std::out_of_range);
        CHECK_THROWS_AS(track.predict(-1.0), std::out_of_range);
    }
    SUBCASE("upstream ghosts extrapolate along the entry bearing") {
        const ars::GhostTrack far(c, 3000.0);
        const auto s = far.predict(0.0);
        const auto entry = c.find("LOJAS");
        const double d = std::hypot(s.pose.x - entry.x, s.pose.y - entry.y);
        CHECK(d > 0.0);
        CHECK(s.speed == doctest::Approx(123.47));
        // flying dt seconds brings it d - dt*speed from the entry fix
        const double ahead = (3000.0 - far.chain_total_time()) * 123.47;
        CHECK(d == doctest::Approx(ahead).epsilon(1e-9));
    }
}

TEST_CASE("reinjection solve") {
    const auto c = chart::builtin_malaga_rwy13();
    const auto missed = missed_at_mapt(c);
    const double radius = 123.47 / geometry::kStandardTurnRate;

    SUBCASE("fixed point residual and plan geometry") {
        ars::Gap gap;
        gap.leader_id = "L";
        gap.leader_eta_s = 400.0;
        gap.ghost_eta_s = 490.0;
        const auto plan = ars::solve_reinjection(missed, gap, c, radius);

        // the returned t* is a fixed point of the travel-time map
        const ars::GhostTrack track(c, gap.ghost_eta_s);
        const auto ghost = track.predict(plan.t_star_s);
        const auto path = geometry::dubins_shortest(missed.pose, ghost.pose, radius);
        CHECK(std::fabs(path.total_length() / ghost.speed - plan.t_star_s) <= 0.1);

        // reinjection point rides the ghost
        CHECK(plan.reinjection_point.x == doctest::Approx(ghost.pose.x).epsilon(1e-9));
        CHECK(plan.reinjection_point.y == doctest::Approx(ghost.pose.y).epsilon(1e-9));
        CHECK(plan.reinjection_point.z == doctest::Approx(ghost.z).epsilon(1e-9));
        CHECK(plan.reinjection_point.speed == doctest::Approx(ghost.speed));

        // three auxiliary waypoints at arc end / straight midpoint / arc start
        REQUIRE(plan.waypoints.size() == 3);
        CHECK(plan.waypoints[0].name == "ARS1");
        CHECK(plan.waypoints[2].name == "ARS3");
        const double s1 = plan.path.lengths[0];
        const auto p1 = geometry::dubins_sample(plan.path, s1);
        CHECK(plan.waypoints[0].x == doctest::Approx(p1.x).epsilon(1e-9));
        // altitudes interpolate between the go-around altitude and the ghost's
        CHECK(plan.waypoints[0].z >= std::min(missed.z, ghost.z) - 1e-9);
        CHECK(plan.waypoints[0].z <= std::max(missed.z, ghost.z) + 1e-9);

        // a close gap merges onto the final approach segment
        CHECK(plan.resume_leg == c.nominal_index("RWY13/LTP"));
    }

    SUBCASE("a farther gap rejoins upstream of the FAP") {
        ars::Gap gap;
        gap.leader_id = "L";
        gap.leader_eta_s = 710.0;
        gap.ghost_eta_s = 800.0;
        const auto plan = ars::solve_reinjection(missed, gap, c, radius);
        CHECK(plan.resume_leg <= c.nominal_index("MG401"));
        // auxiliary waypoints sit between the go-around point and the
        // approach track, inside the terminal area
        for (const auto& wp : plan.waypoints) {
            CHECK(std::hypot(wp.x, wp.y) < 60000.0);
            CHECK(wp.z >= missed_at_mapt(c).z - 1e-9);
        }
    }

    SUBCASE("bisection residual on randomized gaps") {
        std::mt19937 rng(777);
        std::uniform_real_distribution<double> eta(260.0, 1300.0);
        int solved = 0;
        for (int i = 0; i < 100; ++i) {
            ars::Gap gap;
            gap.leader_id = "L";
            gap.ghost_eta_s = eta(rng);
            gap.leader_eta_s = gap.ghost_eta_s - 90.0;
            try {
                const auto plan = ars::solve_reinjection(missed, gap, c, radius);
                const ars::GhostTrack track(c, gap.ghost_eta_s);
                const auto ghost = track.predict(plan.t_star_s);
                const auto path = geometry::dubins_shortest(missed.pose, ghost.pose, radius);
                CHECK(std::fabs(path.total_length() / ghost.speed - plan.t_star_s) <= 0.1);
                ++solved;
            } catch (const ars::UnreachableGap&) {
            }
        }
        CHECK(solved == 100);
    }

    SUBCASE("determinism") {
        ars::Gap gap;
        gap.leader_id = "L";
        gap.ghost_eta_s = 500.0;
        const auto a = ars::solve_reinjection(missed, gap, c, radius);
        const auto b = ars::solve_reinjection(missed, gap, c, radius);
        CHECK(a.t_star_s == b.t_star_s);
        CHECK(a.reinjection_point.x == b.reinjection_point.x);
        CHECK(ars::plan_to_json(a) == ars::plan_to_json(b));
    }

    SUBCASE("plan json shape") {
        ars::Gap gap;
        gap.leader_id = "L";
        gap.ghost_eta_s = 500.0;
        const auto plan = ars::solve_reinjection(missed, gap, c, radius);
        const auto j = ars::plan_to_json(plan);
        CHECK(j.find("\"gap\"") != std::string::npos);
        CHECK(j.find("\"t_star\"") != std::string::npos);
        CHECK(j.find("\"waypoints\"") != std::string::npos);
        CHECK(j.find("\"reinjection_point\"") != std::string::npos);
    }
}

TEST_CASE("conventional activation") {
    const auto c = chart::builtin_malaga_rwy13();
    const auto seq = ars::activate_conventional(c);
    REQUIRE(seq.size() == 8);
    CHECK(seq[0].name == "MA20NM");
    CHECK(seq[1].name == "XILVI");
    CHECK(seq[2].name == "TOLSU");
    CHECK(seq[3].name == "MARTIN");
    CHECK(seq[4].name == "MG403");
    CHECK(seq[5].name == "MG402");
    CHECK(seq[6].name == "MG401");
    CHECK(seq.back().name == "RWY13/LTP");

    // idempotent: activating twice gives the same route
    const auto again = ars::activate_conventional(c);
    REQUIRE(again.size() == seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
        CHECK(again[i].name == seq[i].name);
        CHECK(again[i].x == seq[i].x);
    }
}
