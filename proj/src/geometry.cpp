#include "arsim/geometry.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace arsim::geometry {

double normalize_angle(double rad) {
    double a = std::fmod(rad, kTwoPi);
    if (a < 0.0)
        a += kTwoPi;
    if (a >= kTwoPi)
        a = 0.0;
    return a;
}

std::string_view to_string(DubinsWord word) {
    switch (word) {
    case DubinsWord::LSL: return "LSL";
    case DubinsWord::RSR: return "RSR";
    case DubinsWord::LSR: return "LSR";
    case DubinsWord::RSL: return "RSL";
    case DubinsWord::RLR: return "RLR";
    case DubinsWord::LRL: return "LRL";
    }
    return "?";
}

std::array<SegmentKind, 3> DubinsPath::segment_kinds() const {
    using K = SegmentKind;
    switch (word) {
    case DubinsWord::LSL: return {K::Left, K::Straight, K::Left};
    case DubinsWord::RSR: return {K::Right, K::Straight, K::Right};
    case DubinsWord::LSR: return {K::Left, K::Straight, K::Right};
    case DubinsWord::RSL: return {K::Right, K::Straight, K::Left};
    case DubinsWord::RLR: return {K::Right, K::Left, K::Right};
    case DubinsWord::LRL: return {K::Left, K::Right, K::Left};
    }
    return {K::Left, K::Straight, K::Left};
}

namespace {

struct WordSolution {
    double t, p, q; // normalized segment lengths (radius units)
};

// Feasibility boundaries (tangent length 0, or the CCC cosine at +-1) land
// exactly on zero for poses that share a turning circle; without a little
// slack, rounding rejects the word that is in fact optimal.
constexpr double kBoundaryEps = 1e-9;

// Solvers in coordinates normalized so the goal lies at (d, 0); alpha/beta
// are start/goal headings in that frame.
std::optional<WordSolution> solve_lsl(double alpha, double beta, double d) {
    const double sa = std::sin(alpha), ca = std::cos(alpha);
    const double sb = std::sin(beta), cb = std::cos(beta);
    double p_sq = 2.0 + d * d - 2.0 * std::cos(alpha - beta) + 2.0 * d * (sa - sb);
    if (p_sq < -kBoundaryEps)
        return std::nullopt;
    if (p_sq < kBoundaryEps)
        return WordSolution{normalize_angle(beta - alpha), 0.0, 0.0}; // same circle: one arc
    const double tmp = std::atan2(cb - ca, d + sa - sb);
    return WordSolution{normalize_angle(tmp - alpha), std::sqrt(p_sq), normalize_angle(beta - tmp)};
}

std::optional<WordSolution> solve_rsr(double alpha, double beta, double d) {
    const double sa = std::sin(alpha), ca = std::cos(alpha);
    const double sb = std::sin(beta), cb = std::cos(beta);
    double p_sq = 2.0 + d * d - 2.0 * std::cos(alpha - beta) + 2.0 * d * (sb - sa);
    if (p_sq < -kBoundaryEps)
        return std::nullopt;
    if (p_sq < kBoundaryEps)
        return WordSolution{normalize_angle(alpha - beta), 0.0, 0.0}; // same circle: one arc
    const double tmp = std::atan2(ca - cb, d - sa + sb);
    return WordSolution{normalize_angle(alpha - tmp), std::sqrt(p_sq), normalize_angle(tmp - beta)};
}

std::optional<WordSolution> solve_lsr(double alpha, double beta, double d) {
    const double sa = std::sin(alpha), ca = std::cos(alpha);
    const double sb = std::sin(beta), cb = std::cos(beta);
    double p_sq = -2.0 + d * d + 2.0 * std::cos(alpha - beta) + 2.0 * d * (sa + sb);
    if (p_sq < 0.0) {
        if (p_sq < -kBoundaryEps)
            return std::nullopt;
        p_sq = 0.0;
    }
    const double p = std::sqrt(p_sq);
    const double tmp = std::atan2(-ca - cb, d + sa + sb) - std::atan2(-2.0, p);
    return WordSolution{normalize_angle(tmp - alpha), p, normalize_angle(tmp - beta)};
}

std::optional<WordSolution> solve_rsl(double alpha, double beta, double d) {
    const double sa = std::sin(alpha), ca = std::cos(alpha);
    const double sb = std::sin(beta), cb = std::cos(beta);
    double p_sq = -2.0 + d * d + 2.0 * std::cos(alpha - beta) - 2.0 * d * (sa + sb);
    if (p_sq < 0.0) {
        if (p_sq < -kBoundaryEps)
            return std::nullopt;
        p_sq = 0.0;
    }
    const double p = std::sqrt(p_sq);
    const double tmp = std::atan2(ca + cb, d - sa - sb) - std::atan2(2.0, p);
    return WordSolution{normalize_angle(alpha - tmp), p, normalize_angle(beta - tmp)};
}

std::optional<WordSolution> solve_rlr(double alpha, double beta, double d) {
    const double sa = std::sin(alpha), ca = std::cos(alpha);
    const double sb = std::sin(beta), cb = std::cos(beta);
    double tmp = (6.0 - d * d + 2.0 * std::cos(alpha - beta) + 2.0 * d * (sa - sb)) / 8.0;
    if (std::fabs(tmp) > 1.0) {
        if (std::fabs(tmp) > 1.0 + kBoundaryEps)
            return std::nullopt;
        tmp = std::copysign(1.0, tmp);
    }
    const double phi = std::atan2(ca - cb, d - sa + sb);
    const double p = normalize_angle(kTwoPi - std::acos(tmp));
    const double t = normalize_angle(alpha - phi + normalize_angle(p / 2.0));
    const double q = normalize_angle(alpha - beta - t + normalize_angle(p));
    return WordSolution{t, p, q};
}

std::optional<WordSolution> solve_lrl(double alpha, double beta, double d) {
    const double sa = std::sin(alpha), ca = std::cos(alpha);
    const double sb = std::sin(beta), cb = std::cos(beta);
    double tmp = (6.0 - d * d + 2.0 * std::cos(alpha - beta) + 2.0 * d * (sb - sa)) / 8.0;
    if (std::fabs(tmp) > 1.0) {
        if (std::fabs(tmp) > 1.0 + kBoundaryEps)
            return std::nullopt;
        tmp = std::copysign(1.0, tmp);
    }
    const double phi = std::atan2(ca - cb, d + sa - sb);
    const double p = normalize_angle(kTwoPi - std::acos(tmp));
    const double t = normalize_angle(-alpha - phi + p / 2.0);
    const double q = normalize_angle(beta - alpha - t + p);
    return WordSolution{t, p, q};
}

using Solver = std::optional<WordSolution> (*)(double, double, double);

constexpr std::array<std::pair<DubinsWord, Solver>, 6> kSolvers{{
    {DubinsWord::LSL, &solve_lsl},
    {DubinsWord::RSR, &solve_rsr},
    {DubinsWord::LSR, &solve_lsr},
    {DubinsWord::RSL, &solve_rsl},
    {DubinsWord::RLR, &solve_rlr},
    {DubinsWord::LRL, &solve_lrl},
}};

Pose2D advance(const Pose2D& pose, SegmentKind kind, double s, double radius) {
    Pose2D out = pose;
    switch (kind) {
    case SegmentKind::Straight:
        out.x += s * std::cos(pose.psi);
        out.y += s * std::sin(pose.psi);
        break;
    case SegmentKind::Left: {
        const double dpsi = s / radius;
        out.x += radius * (std::sin(pose.psi + dpsi) - std::sin(pose.psi));
        out.y -= radius * (std::cos(pose.psi + dpsi) - std::cos(pose.psi));
        out.psi = normalize_angle(pose.psi + dpsi);
        break;
    }
    case SegmentKind::Right: {
        const double dpsi = s / radius;
        out.x += radius * (std::sin(pose.psi) - std::sin(pose.psi - dpsi));
        out.y += radius * (std::cos(pose.psi - dpsi) - std::cos(pose.psi));
        out.psi = normalize_angle(pose.psi - dpsi);
        break;
    }
    }
    return out;
}

} // namespace

DubinsPath dubins_shortest(const Pose2D& start, const Pose2D& goal, double radius) {
    if (!(radius > 0.0))
        throw std::invalid_argument("dubins_shortest: radius must be positive");

    const double dx = goal.x - start.x;
    const double dy = goal.y - start.y;
    const double dist = std::hypot(dx, dy);
    const double d = dist / radius;
    const double theta = dist > 0.0 ? std::atan2(dy, dx) : 0.0;
    const double alpha = normalize_angle(start.psi - theta);
    const double beta = normalize_angle(goal.psi - theta);

    DubinsPath best;
    best.start = start;
    best.radius = radius;
    double best_len = std::numeric_limits<double>::infinity();
    for (const auto& [word, solver] : kSolvers) {
        const auto sol = solver(alpha, beta, d);
        if (!sol)
            continue;
        const double len = sol->t + sol->p + sol->q;
        if (len < best_len) { // strict: ties keep the earlier word
            best_len = len;
            best.word = word;
            best.lengths = {sol->t * radius, sol->p * radius, sol->q * radius};
        }
    }
    if (!std::isfinite(best_len))
        throw std::runtime_error("dubins_shortest: no candidate word solved"); // unreachable
    return best;
}

Pose2D dubins_sample(const DubinsPath& path, double s) {
    const double total = path.total_length();
    const double eps = 1e-9 * std::max(1.0, total);
    if (s < -eps || s > total + eps)
        throw std::out_of_range("dubins_sample: arc length out of range");
    s = std::clamp(s, 0.0, total);

    Pose2D pose = path.start;
    const auto kinds = path.segment_kinds();
    for (int i = 0; i < 3; ++i) {
        const double seg = path.lengths[static_cast<std::size_t>(i)];
        if (s <= seg)
            return advance(pose, kinds[static_cast<std::size_t>(i)], s, path.radius);
        pose = advance(pose, kinds[static_cast<std::size_t>(i)], seg, path.radius);
        s -= seg;
    }
    return pose;
}

namespace {

constexpr double kCoincidentEps = 1e-9;

// Goal pose of each leg: at the leg position, heading along the outbound
// bearing toward the next distinct point (fly-by); the last leg keeps its
// inbound bearing. Zero-length legs inherit the previous heading.
std::vector<Pose2D> leg_goal_poses(const Pose2D& from, std::span<const Leg> legs) {
    std::vector<Pose2D> goals(legs.size());
    double prev_x = from.x, prev_y = from.y;
    double carry_psi = from.psi;
    for (std::size_t i = 0; i < legs.size(); ++i) {
        double heading = carry_psi;
        if (i + 1 < legs.size()) {
            const double ox = legs[i + 1].x - legs[i].x;
            const double oy = legs[i + 1].y - legs[i].y;
            if (std::hypot(ox, oy) > kCoincidentEps)
                heading = std::atan2(oy, ox);
            else {
                const double ix = legs[i].x - prev_x;
                const double iy = legs[i].y - prev_y;
                if (std::hypot(ix, iy) > kCoincidentEps)
                    heading = std::atan2(iy, ix);
            }
        } else {
            const double ix = legs[i].x - prev_x;
            const double iy = legs[i].y - prev_y;
            if (std::hypot(ix, iy) > kCoincidentEps)
                heading = std::atan2(iy, ix);
        }
        goals[i] = Pose2D{legs[i].x, legs[i].y, normalize_angle(heading)};
        carry_psi = goals[i].psi;
        prev_x = legs[i].x;
        prev_y = legs[i].y;
    }
    return goals;
}

} // namespace

double sequence_eta(const Pose2D& from, std::span<const Leg> legs, double radius) {
    if (legs.empty())
        throw std::invalid_argument("sequence_eta: empty waypoint list");
    const auto goals = leg_goal_poses(from, legs);
    Pose2D pose = from;
    double eta = 0.0;
    for (std::size_t i = 0; i < legs.size(); ++i) {
        if (!(legs[i].speed > 0.0))
            throw std::invalid_argument("sequence_eta: leg speed must be positive");
        const double dist = std::hypot(goals[i].x - pose.x, goals[i].y - pose.y);
        if (dist > kCoincidentEps) {
            const auto path = dubins_shortest(pose, goals[i], radius);
            eta += path.total_length() / legs[i].speed;
        }
        pose = goals[i];
    }
    return eta;
}

FlightChain::FlightChain(const Pose2D& start, double start_z, std::vector<Leg> legs,
                         double turn_rate)
    : legs_(std::move(legs)), start_z_(start_z) {
    if (legs_.empty())
        throw std::invalid_argument("FlightChain: empty waypoint list");
    if (!(turn_rate > 0.0))
        throw std::invalid_argument("FlightChain: turn rate must be positive");

    const auto goals = leg_goal_poses(start, legs_);
    Pose2D pose = start;
    double z = start_z;
    paths_.reserve(legs_.size());
    durations_.reserve(legs_.size());
    z_start_.reserve(legs_.size());
    for (std::size_t i = 0; i < legs_.size(); ++i) {
        if (!(legs_[i].speed > 0.0))
            throw std::invalid_argument("FlightChain: leg speed must be positive");
        const double radius = legs_[i].speed / turn_rate;
        const auto path = dubins_shortest(pose, goals[i], radius);
        paths_.push_back(path);
        durations_.push_back(path.total_length() / legs_[i].speed);
        z_start_.push_back(z);
        total_time_ += durations_.back();
        pose = goals[i];
        z = legs_[i].z;
    }
}

double FlightChain::total_length() const {
    double len = 0.0;
    for (const auto& p : paths_)
        len += p.total_length();
    return len;
}

FlightChain::Sample FlightChain::sample_time(double t) const {
    const double eps = 1e-9 * std::max(1.0, total_time_);
    if (t < -eps || t > total_time_ + eps)
        throw std::out_of_range("FlightChain::sample_time: time out of range");
    t = std::clamp(t, 0.0, total_time_);

    for (std::size_t i = 0; i < legs_.size(); ++i) {
        if (t <= durations_[i] || i + 1 == legs_.size()) {
            const double frac = durations_[i] > 0.0 ? std::clamp(t / durations_[i], 0.0, 1.0) : 1.0;
            const double s = frac * paths_[i].total_length();
            Sample out;
            out.pose = dubins_sample(paths_[i], s);
            out.z = z_start_[i] + frac * (legs_[i].z - z_start_[i]);
            out.speed = legs_[i].speed;
            out.leg = i;
            return out;
        }
        t -= durations_[i];
    }
    // not reached
    return Sample{};
}

} // namespace arsim::geometry
