#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "grushin/core.hpp"
#include "grushin/distance.hpp"
#include "grushin/errors.hpp"

// Metric-measure double of the Grushin half-plane: two copies of
// {x >= 0} glued along the y-axis by the identity, carrying the sum of the
// Lebesgue measures. Cross-copy distances are the infimum over boundary
// points of the sum of half-plane distances; the double is isometric to the
// full Grushin plane via (B, (x,y)) -> (-x, y), which
// double_equivalence_residual quantifies.

namespace grushin {

enum class Copy { A, B };

struct GluedPoint {
    Copy copy = Copy::A;
    Point p;  // x >= 0; boundary points (0, y) are identified across copies
};

enum class CopySelect { A, B, Both };

struct BorelSetSpec {
    enum class Shape { Disk, Rectangle };
    Shape shape = Shape::Disk;
    CopySelect copy = CopySelect::A;
    Point center;
    double radius = 1.0;
    double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;

    static BorelSetSpec disk(const Point& c, double r, CopySelect sel) {
        BorelSetSpec b;
        b.shape = Shape::Disk;
        b.center = c;
        b.radius = r;
        b.copy = sel;
        return b;
    }
    static BorelSetSpec rect(double x0, double y0, double x1, double y1, CopySelect sel) {
        BorelSetSpec b;
        b.shape = Shape::Rectangle;
        b.x0 = x0; b.y0 = y0; b.x1 = x1; b.y1 = y1;
        b.copy = sel;
        return b;
    }
};

namespace detail {

inline void require_glued(const GluedPoint& P) {
    if (P.p.x < 0.0)
        throw Error(ErrorCode::BasePointOutsideSpace, "glued points have x >= 0");
}

// Half-plane distance from p to the boundary point (0, s). Axis-to-axis
// pairs sit on the closure of the exponential image; their distance has the
// closed form sqrt(2 pi |dy|) (ray endpoint y = pi u^2/2 at t = pi, length
// pi |u|, carried around by vertical translations).
inline double dist_to_axis_point(const Point& p, double s, std::optional<Covector>& hint) {
    if (p.x == 0.0) return std::sqrt(2.0 * std::numbers::pi * std::abs(s - p.y));
    const Point target{0.0, s};
    if (p.x == target.x && p.y == target.y) return 0.0;
    const Covector* h = hint ? &*hint : nullptr;
    const NewtonOutcome n = invert_multistart(p, target, SpaceKind::HalfPlanePlus, h);
    if (n.converged) {
        hint = n.lam;
        return geodesic_speed(p, n.lam);
    }
    hint.reset();
    const BoundaryLimit bl = boundary_limit(p, target, SpaceKind::HalfPlanePlus);
    if (bl.valid) return bl.length;
    return graph_oracle_distance(p, target, SpaceKind::HalfPlanePlus,
                                 GridOracleConfig::for_endpoints(p, target, 0.005));
}

}  // namespace detail

inline double glued_distance(const GluedPoint& P, const GluedPoint& Q) {
    detail::require_glued(P);
    detail::require_glued(Q);
    if (P.copy == Q.copy) return distance(P.p, Q.p, SpaceKind::HalfPlanePlus).value;
    // boundary points are identified, so a cross-copy pair with one endpoint
    // on the axis reduces to a single half-plane distance
    if (P.p.x == 0.0 || Q.p.x == 0.0) return distance(P.p, Q.p, SpaceKind::HalfPlanePlus).value;

    const double ylo = std::min(P.p.y, Q.p.y), yhi = std::max(P.p.y, Q.p.y);
    const double D = P.p.x + Q.p.x + (yhi - ylo) + 1.0;
    const double slo = ylo - D, shi = yhi + D;
    constexpr int kNodes = 256;
    std::optional<Covector> hint_p, hint_q;
    auto f = [&](double s) {
        return detail::dist_to_axis_point(P.p, s, hint_p) +
               detail::dist_to_axis_point(Q.p, s, hint_q);
    };
    double best_s = slo, best_f = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kNodes; ++i) {
        const double s = slo + (shi - slo) * i / (kNodes - 1);
        const double val = f(s);
        if (val < best_f) {
            best_f = val;
            best_s = s;
        }
    }
    const double cell = (shi - slo) / (kNodes - 1);
    double lo = best_s - cell, hi = best_s + cell;
    constexpr double phi = 0.6180339887498949;
    double s1 = hi - phi * (hi - lo), s2 = lo + phi * (hi - lo);
    double f1 = f(s1), f2 = f(s2);
    while (hi - lo > 1e-10) {
        if (f1 < f2) {
            hi = s2; s2 = s1; f2 = f1;
            s1 = hi - phi * (hi - lo);
            f1 = f(s1);
        } else {
            lo = s1; s1 = s2; f1 = f2;
            s2 = lo + phi * (hi - lo);
            f2 = f(s2);
        }
    }
    return std::min(best_f, std::min(f1, f2));
}

// | d_double((A,p),(B,q)) - d_plane(p, reflect(q)) |, the numerical content
// of the double-is-the-plane identification.
inline double double_equivalence_residual(const Point& p, const Point& q) {
    if (p.x < 0.0 || q.x < 0.0)
        throw Error(ErrorCode::BasePointOutsideSpace, "points must have x >= 0");
    const double via_double = glued_distance({Copy::A, p}, {Copy::B, q});
    const double via_plane = distance(p, reflect_x(q), SpaceKind::FullPlane).value;
    return std::abs(via_double - via_plane);
}

namespace detail {
// Area of the disk (c, r) clipped to the half-plane x >= 0.
inline double half_disk_area(double cx, double r) {
    if (cx >= r) return std::numbers::pi * r * r;
    if (cx <= -r) return 0.0;
    return r * r * std::acos(-cx / r) + cx * std::sqrt(r * r - cx * cx);
}
}  // namespace detail

// m_Z(B) = area of the copy-A part plus the copy-B part (the seam has zero
// measure). Shapes are clipped to x >= 0.
inline double glued_measure(const BorelSetSpec& B) {
    double per_copy = 0.0;
    if (B.shape == BorelSetSpec::Shape::Disk) {
        if (!(B.radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
        per_copy = detail::half_disk_area(B.center.x, B.radius);
    } else {
        const double xlo = std::max(0.0, std::min(B.x0, B.x1));
        const double xhi = std::max(0.0, std::max(B.x0, B.x1));
        per_copy = (xhi - xlo) * std::abs(B.y1 - B.y0);
    }
    return B.copy == CopySelect::Both ? 2.0 * per_copy : per_copy;
}

}  // namespace grushin
