#pragma once

// Test-only Dubins oracle. Builds every candidate path by explicit
// tangent-circle geometry (tangent lines between turning circles, middle
// circles for the CCC words) instead of the normalized-coordinate closed
// forms used by the library, so agreement between the two is meaningful.

#include "arsim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace oracle {

using arsim::geometry::kPi;
using arsim::geometry::kTwoPi;
using arsim::geometry::normalize_angle;
using arsim::geometry::Pose2D;

struct Vec {
    double x, y;
};

inline Vec dir(double a) { return {std::cos(a), std::sin(a)}; }
inline Vec add(Vec a, Vec b) { return {a.x + b.x, a.y + b.y}; }
inline Vec sub(Vec a, Vec b) { return {a.x - b.x, a.y - b.y}; }
inline Vec mul(Vec a, double k) { return {a.x * k, a.y * k}; }
inline double norm(Vec a) { return std::hypot(a.x, a.y); }
inline double ang(Vec a) { return std::atan2(a.y, a.x); }

// Center of the turning circle on the given side of a pose (+1 left, -1 right).
inline Vec circle_center(const Pose2D& p, double r, int side) {
    return {p.x + r * std::cos(p.psi + side * kPi / 2.0),
            p.y + r * std::sin(p.psi + side * kPi / 2.0)};
}

// Arc angle flown from heading a to heading b turning in the given direction.
inline double arc(double a, double b, int side) {
    return side > 0 ? normalize_angle(b - a) : normalize_angle(a - b);
}

// CSC candidate: first turn side s1, last turn side s2. Returns the path
// length or +inf when the required tangent does not exist.
inline double csc_length(const Pose2D& a, const Pose2D& b, double r, int s1, int s2) {
    const double inf = std::numeric_limits<double>::infinity();
    const Vec c1 = circle_center(a, r, s1);
    const Vec c2 = circle_center(b, r, s2);
    const Vec d12 = sub(c2, c1);
    const double D = norm(d12);
    double psi_t; // heading of the straight segment
    if (s1 == s2) {
        if (D < 1e-12) {
            // both poses ride the same circle: the "CSC" degenerates to one arc
            return r * arc(a.psi, b.psi, s1);
        }
        psi_t = ang(d12);
    } else {
        // inner tangent; the circles must not overlap
        if (D < 2.0 * r * (1.0 - 1e-12))
            return inf;
        const double off = std::asin(std::min(1.0, 2.0 * r / D));
        psi_t = ang(d12) + s1 * off;
    }
    const Vec p1 = add(c1, mul(dir(psi_t - s1 * kPi / 2.0), r));
    const Vec p2 = add(c2, mul(dir(psi_t - s2 * kPi / 2.0), r));
    const Vec seg = sub(p2, p1);
    const double straight = seg.x * std::cos(psi_t) + seg.y * std::sin(psi_t);
    if (straight < -1e-9)
        return inf;
    return r * arc(a.psi, psi_t, s1) + std::max(0.0, straight) + r * arc(psi_t, b.psi, s2);
}

// CCC candidate with outer turns on side s (middle arc on -s). Evaluates a
// specific middle-circle center c3.
inline double ccc_with_center(const Pose2D& a, const Pose2D& b, double r, int s, Vec c1, Vec c2,
                              Vec c3) {
    const double psi1 = ang(sub(c3, c1)) + s * kPi / 2.0; // heading at the first tangency
    const double psi2 = ang(sub(c3, c2)) + s * kPi / 2.0; // heading at the second
    return r * (arc(a.psi, psi1, s) + arc(psi1, psi2, -s) + arc(psi2, b.psi, s));
}

inline double ccc_length(const Pose2D& a, const Pose2D& b, double r, int s) {
    const double inf = std::numeric_limits<double>::infinity();
    const Vec c1 = circle_center(a, r, s);
    const Vec c2 = circle_center(b, r, s);
    const Vec d12 = sub(c2, c1);
    const double D = norm(d12);
    if (D > 4.0 * r * (1.0 + 1e-12))
        return inf;
    double best = inf;
    if (D < 1e-9) {
        // coincident circles: the middle-circle center can sit anywhere on a
        // ring of radius 2r; fan it out
        for (int k = 0; k < 720; ++k) {
            const Vec c3 = add(c1, mul(dir(kTwoPi * k / 720.0), 2.0 * r));
            best = std::min(best, ccc_with_center(a, b, r, s, c1, c2, c3));
        }
        return best;
    }
    const double half = std::sqrt(std::max(0.0, 4.0 * r * r - D * D / 4.0));
    const Vec mid = {(c1.x + c2.x) / 2.0, (c1.y + c2.y) / 2.0};
    const Vec n = {-d12.y / D, d12.x / D};
    for (const double sign : {1.0, -1.0}) {
        const Vec c3 = add(mid, mul(n, sign * half));
        best = std::min(best, ccc_with_center(a, b, r, s, c1, c2, c3));
    }
    return best;
}

// Shortest length over all six words; brute geometric enumeration.
inline double shortest_length(const Pose2D& a, const Pose2D& b, double r) {
    double best = std::numeric_limits<double>::infinity();
    best = std::min(best, csc_length(a, b, r, +1, +1)); // LSL
    best = std::min(best, csc_length(a, b, r, -1, -1)); // RSR
    best = std::min(best, csc_length(a, b, r, +1, -1)); // LSR
    best = std::min(best, csc_length(a, b, r, -1, +1)); // RSL
    best = std::min(best, ccc_length(a, b, r, -1));     // RLR
    best = std::min(best, ccc_length(a, b, r, +1));     // LRL
    return best;
}

} // namespace oracle
