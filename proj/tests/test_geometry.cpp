#include <doctest.h>

#include "arsim/geometry.hpp"
#include "oracle_dubins.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

using namespace arsim;
using geometry::Pose2D;

namespace {

Pose2D random_pose(std::mt19937& rng, double span) {
    std::uniform_real_distribution<double> pos(-span, span);
    std::uniform_real_distribution<double> heading(0.0, geometry::kTwoPi);
    return {pos(rng), pos(rng), heading(rng)};
}

} // namespace

TEST_CASE("normalize_angle range") {
    CHECK(geometry::normalize_angle(0.0) == 0.0);
    CHECK(geometry::normalize_angle(-1e-9) == doctest::Approx(geometry::kTwoPi - 1e-9));
    CHECK(geometry::normalize_angle(geometry::kTwoPi) == 0.0);
    CHECK(geometry::normalize_angle(7.0 * geometry::kPi) == doctest::Approx(geometry::kPi));
}

TEST_CASE("collinear aligned poses give a pure straight") {
    const auto path = geometry::dubins_shortest({0, 0, 0}, {100, 0, 0}, 10.0);
    CHECK(path.word == geometry::DubinsWord::LSL); // tie-break keeps the first word
    CHECK(path.total_length() == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(path.lengths[0] == doctest::Approx(0.0));
    CHECK(path.lengths[2] == doctest::Approx(0.0));
}

TEST_CASE("identical poses give zero length") {
    const auto path = geometry::dubins_shortest({5, -3, 1.0}, {5, -3, 1.0}, 25.0);
    CHECK(path.total_length() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("poses sharing a turning circle reduce to one arc") {
    // quarter turn left on a circle of radius 10 centred at (0, 10)
    const Pose2D start{0, 0, 0};
    const Pose2D goal{10, 10, geometry::kPi / 2.0};
    const auto path = geometry::dubins_shortest(start, goal, 10.0);
    CHECK(path.total_length() == doctest::Approx(10.0 * geometry::kPi / 2.0).epsilon(1e-9));
    const auto end = geometry::dubins_sample(path, path.total_length());
    CHECK(end.x == doctest::Approx(goal.x).epsilon(1e-9));
    CHECK(end.y == doctest::Approx(goal.y).epsilon(1e-9));

    // same circle flown the other way round
    const auto back = geometry::dubins_shortest(goal, start, 10.0);
    CHECK(back.total_length() == doctest::Approx(10.0 * 3.0 * geometry::kPi / 2.0).epsilon(1e-9));
}

TEST_CASE("offset parallel poses match the oracle") {
    const Pose2D start{0, 0, 0};
    const Pose2D goal{0, 40, 0};
    const auto path = geometry::dubins_shortest(start, goal, 10.0);
    CHECK(path.total_length() ==
          doctest::Approx(oracle::shortest_length(start, goal, 10.0)).epsilon(1e-9));
}

TEST_CASE("oracle equivalence on random pose pairs") {
    std::mt19937 rng(20240913);
    double worst_len = 0.0;
    double worst_end = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const auto a = random_pose(rng, 5000.0);
        const auto b = random_pose(rng, 5000.0);
        const double r = std::uniform_real_distribution<double>(200.0, 2500.0)(rng);
        const auto path = geometry::dubins_shortest(a, b, r);
        const double ref = oracle::shortest_length(a, b, r);
        worst_len = std::max(worst_len, std::fabs(path.total_length() - ref));
        const auto end = geometry::dubins_sample(path, path.total_length());
        worst_end = std::max(worst_end, std::hypot(end.x - b.x, end.y - b.y));
        const double dpsi =
            std::fabs(std::remainder(end.psi - b.psi, geometry::kTwoPi));
        CHECK(dpsi < 1e-8);
    }
    CHECK(worst_len < 1e-6);
    CHECK(worst_end < 1e-6);
}

TEST_CASE("sampling endpoints and curvature") {
    std::mt19937 rng(7);
    for (int i = 0; i < 50; ++i) {
        const auto a = random_pose(rng, 3000.0);
        const auto b = random_pose(rng, 3000.0);
        const double r = 500.0;
        const auto path = geometry::dubins_shortest(a, b, r);
        const auto s0 = geometry::dubins_sample(path, 0.0);
        CHECK(s0.x == doctest::Approx(a.x).epsilon(1e-12));
        CHECK(s0.y == doctest::Approx(a.y).epsilon(1e-12));
        // finite-difference heading change per meter never exceeds 1/r
        const double total = path.total_length();
        const int n = 200;
        auto prev = geometry::dubins_sample(path, 0.0);
        for (int k = 1; k <= n; ++k) {
            const auto cur = geometry::dubins_sample(path, total * k / n);
            const double ds = total / n;
            const double dpsi = std::fabs(std::remainder(cur.psi - prev.psi, geometry::kTwoPi));
            CHECK(dpsi / ds <= 1.0 / r + 1e-6);
            prev = cur;
        }
    }
    const auto path = geometry::dubins_shortest({0, 0, 0}, {500, 200, 1.0}, 100.0);
    CHECK_THROWS_AS(geometry::dubins_sample(path, -1.0), std::out_of_range);
    CHECK_THROWS_AS(geometry::dubins_sample(path, path.total_length() + 1.0), std::out_of_range);
}

TEST_CASE("symmetry under pose reversal") {
    std::mt19937 rng(99);
    for (int i = 0; i < 200; ++i) {
        const auto a = random_pose(rng, 4000.0);
        const auto b = random_pose(rng, 4000.0);
        const double r = 800.0;
        const Pose2D ra{b.x, b.y, geometry::normalize_angle(b.psi + geometry::kPi)};
        const Pose2D rb{a.x, a.y, geometry::normalize_angle(a.psi + geometry::kPi)};
        const double fwd = geometry::dubins_shortest(a, b, r).total_length();
        const double rev = geometry::dubins_shortest(ra, rb, r).total_length();
        CHECK(fwd == doctest::Approx(rev).epsilon(1e-9));
    }
}

TEST_CASE("scaling invariance") {
    const Pose2D a{120.0, -340.0, 0.7};
    const Pose2D b{-900.0, 400.0, 4.0};
    const double base = geometry::dubins_shortest(a, b, 150.0).total_length();
    for (const double k : {0.5, 2.0, 7.0}) {
        const Pose2D ak{a.x * k, a.y * k, a.psi};
        const Pose2D bk{b.x * k, b.y * k, b.psi};
        const double scaled = geometry::dubins_shortest(ak, bk, 150.0 * k).total_length();
        CHECK(scaled == doctest::Approx(base * k).epsilon(1e-9));
    }
}

TEST_CASE("length dominates euclidean distance") {
    std::mt19937 rng(4242);
    for (int i = 0; i < 300; ++i) {
        const auto a = random_pose(rng, 2000.0);
        const auto b = random_pose(rng, 2000.0);
        const auto path = geometry::dubins_shortest(a, b, 600.0);
        CHECK(path.total_length() >= std::hypot(b.x - a.x, b.y - a.y) - 1e-6);
    }
}

TEST_CASE("sequence_eta basics") {
    using geometry::Leg;
    const Pose2D from{0, 0, 0};

    SUBCASE("single straight leg") {
        const std::vector<Leg> legs{{1000.0, 0.0, 0.0, 100.0}};
        CHECK(geometry::sequence_eta(from, legs, 100.0 / geometry::kStandardTurnRate) ==
              doctest::Approx(10.0).epsilon(1e-9));
    }
    SUBCASE("zero-length suffix leaves the ETA unchanged") {
        const std::vector<Leg> legs{{1000.0, 0.0, 0.0, 100.0}};
        const std::vector<Leg> extended{{1000.0, 0.0, 0.0, 100.0}, {1000.0, 0.0, 0.0, 100.0}};
        const double r = 100.0 / geometry::kStandardTurnRate;
        CHECK(geometry::sequence_eta(from, legs, r) ==
              doctest::Approx(geometry::sequence_eta(from, extended, r)).epsilon(1e-9));
    }
    SUBCASE("two-leg dogleg matches per-leg dubins") {
        const double r = 500.0;
        const std::vector<Leg> legs{{4000.0, 0.0, 0.0, 100.0}, {4000.0, 3000.0, 0.0, 80.0}};
        // entering leg 0 aligned with the bearing toward leg 1
        const double to_next = std::atan2(3000.0, 0.0);
        const auto first = geometry::dubins_shortest(from, {4000.0, 0.0, to_next}, r);
        const auto second =
            geometry::dubins_shortest({4000.0, 0.0, to_next}, {4000.0, 3000.0, to_next}, r);
        const double expect = first.total_length() / 100.0 + second.total_length() / 80.0;
        CHECK(geometry::sequence_eta(from, legs, r) == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("flight chain accounting") {
    using geometry::Leg;
    const Pose2D start{0, 0, 0};
    std::vector<Leg> legs{{5000.0, 0.0, 1000.0, 100.0}, {5000.0, 4000.0, 500.0, 80.0}};
    const geometry::FlightChain chain(start, 1500.0, legs);
    CHECK(chain.leg_count() == 2);
    CHECK(chain.total_time() ==
          doctest::Approx(chain.leg_duration(0) + chain.leg_duration(1)).epsilon(1e-12));

    const auto at0 = chain.sample_time(0.0);
    CHECK(at0.pose.x == doctest::Approx(0.0));
    CHECK(at0.z == doctest::Approx(1500.0));

    const auto end = chain.sample_time(chain.total_time());
    CHECK(end.pose.x == doctest::Approx(5000.0).epsilon(1e-6));
    CHECK(end.pose.y == doctest::Approx(4000.0).epsilon(1e-6));
    CHECK(end.z == doctest::Approx(500.0).epsilon(1e-9));

    // altitude is linear in arc length within a leg
    const double mid = chain.leg_duration(0) / 2.0;
    const auto half = chain.sample_time(mid);
    CHECK(half.z == doctest::Approx(1250.0).epsilon(1e-6));

    // sample_remaining mirrors sample_time
    const auto tail = chain.sample_remaining(10.0);
    const auto same = chain.sample_time(chain.total_time() - 10.0);
    CHECK(tail.pose.x == doctest::Approx(same.pose.x));
    CHECK(tail.pose.y == doctest::Approx(same.pose.y));
}
