#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace arsim::geometry {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Standard-rate turn (3 deg/s) in rad/s; default coupling between leg speed
/// and turn radius.
inline constexpr double kStandardTurnRate = kPi / 60.0;

double normalize_angle(double rad); // -> [0, 2*pi)

struct Pose2D {
    double x = 0.0;   // east, m
    double y = 0.0;   // north, m
    double psi = 0.0; // heading, rad in [0, 2*pi)
};

enum class SegmentKind { Left, Straight, Right };

enum class DubinsWord { LSL, RSR, LSR, RSL, RLR, LRL };

std::string_view to_string(DubinsWord word);

struct DubinsPath {
    Pose2D start;
    double radius = 0.0;
    DubinsWord word = DubinsWord::LSL;
    std::array<double, 3> lengths{}; // per-segment arc lengths, m

    double total_length() const { return lengths[0] + lengths[1] + lengths[2]; }
    std::array<SegmentKind, 3> segment_kinds() const;
};

/// Minimum-length Dubins path between two poses for a fixed turn radius.
/// Ties break in word order LSL, RSR, LSR, RSL, RLR, LRL.
DubinsPath dubins_shortest(const Pose2D& start, const Pose2D& goal, double radius);

/// Pose at arc length s along the path; s must lie in [0, total length].
Pose2D dubins_sample(const DubinsPath& path, double s);

struct Leg {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double speed = 0.0; // commanded horizontal speed toward this point, m/s
};

/// Travel time over a waypoint chain flown as Dubins legs with a common turn
/// radius. The goal heading entering leg k is the outbound bearing toward leg
/// k+1 (fly-by); the last leg keeps the bearing of its own final segment.
double sequence_eta(const Pose2D& from, std::span<const Leg> legs, double radius);

/// Precomputed Dubins chain over a waypoint sequence: per-leg paths, travel
/// times and linear altitude profiles. Turn radius per leg follows the leg
/// speed via the configured turn rate.
class FlightChain {
  public:
    struct Sample {
        Pose2D pose;
        double z = 0.0;
        double speed = 0.0;
        std::size_t leg = 0; // index into the waypoint list of the leg target
    };

    FlightChain(const Pose2D& start, double start_z, std::vector<Leg> legs,
                double turn_rate = kStandardTurnRate);

    double total_time() const { return total_time_; }
    double total_length() const;
    std::size_t leg_count() const { return legs_.size(); }
    double leg_duration(std::size_t i) const { return durations_[i]; }
    const Leg& leg(std::size_t i) const { return legs_[i]; }

    /// State after flying for t seconds from the chain start, t in [0, total].
    Sample sample_time(double t) const;
    /// State with the given time remaining to the chain end.
    Sample sample_remaining(double remaining) const { return sample_time(total_time_ - remaining); }

  private:
    std::vector<Leg> legs_;
    std::vector<DubinsPath> paths_;
    std::vector<double> durations_;
    std::vector<double> z_start_;
    double start_z_;
    double total_time_ = 0.0;
};

} // namespace arsim::geometry
