#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include "grushin/core.hpp"
#include "grushin/distance.hpp"
#include "grushin/errors.hpp"

// Geodesic rays t -> exp_q(tu, tv) of the full Grushin plane and where they
// stop minimizing. Rays minimize until the covector ray hits |v| = pi, i.e.
// t_* = pi/|v| (infinite for horizontal lines). The cut locus of an on-axis
// point is the closure of the y-axis; for an off-axis point q = (x0, y0) it
// is the pair of vertical half-lines {(-x0, y0 +/- (pi x0^2/2 + s)), s >= 0},
// obtained from the reference case x0 = 1 by dilation and translation.

namespace grushin {

struct RaySpec {
    Point q;
    Covector lam;  // != (0,0)
};

enum class CutKind { VerticalAxisClosure, TwoVerticalHalfLines };

inline const char* to_string(CutKind k) {
    return k == CutKind::VerticalAxisClosure ? "vertical_axis_closure" : "two_vertical_half_lines";
}

struct CutDescription {
    CutKind kind = CutKind::VerticalAxisClosure;
    double x_c_signed = 0.0;  // abscissa of the half-lines
    double y_base = 0.0;      // ordinate of the base point
    double y_offset = 0.0;    // half-lines start at y_base +/- y_offset
};

inline double minimality_time(const RaySpec& ray) {
    if (ray.lam.u == 0.0 && ray.lam.v == 0.0)
        throw Error(ErrorCode::InvalidArgument, "ray needs a nonzero covector");
    if (ray.lam.v == 0.0) return std::numeric_limits<double>::infinity();
    return std::numbers::pi / std::abs(ray.lam.v);
}

inline CutDescription cut_locus(const Point& q) {
    if (q.x == 0.0) return {CutKind::VerticalAxisClosure, 0.0, q.y, 0.0};
    return {CutKind::TwoVerticalHalfLines, -q.x, q.y,
            0.5 * std::numbers::pi * q.x * q.x};
}

struct Meeting {
    Point p;
    double t = 0.0;
};

// First t > 0 at which the rays with covectors (u, v) and (-u, v) meet. The
// x-difference 2u sin(tv)/v first vanishes at tv = pi; the y-components
// agree there as well, so the meeting parameter is the minimality horizon.
// Located by bisection and confirmed against the closed form pi/|v|.
inline Meeting meeting_point(const Point& q, double u, double v) {
    if (v == 0.0) throw Error(ErrorCode::InvalidArgument, "meeting_point needs v != 0");
    if (u == 0.0 && q.x == 0.0)
        throw Error(ErrorCode::NoMeeting, "trivial ray from an on-axis point");
    const double t_closed = std::numbers::pi / std::abs(v);
    double t_meet = t_closed;
    if (u != 0.0) {
        auto xdiff = [&](double t) {
            return exp_map(q, {u, v}, t).x - exp_map(q, {-u, v}, t).x;
        };
        double lo = 0.6 * t_closed, hi = 1.4 * t_closed;
        double flo = xdiff(lo);
        for (int it = 0; it < 200 && hi - lo > 1e-15 * t_closed; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = xdiff(mid);
            if ((flo < 0.0) == (fm < 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        t_meet = 0.5 * (lo + hi);
        if (std::abs(t_meet - t_closed) > 1e-9 * t_closed)
            throw Error(ErrorCode::Unreachable, "bisection disagrees with the closed form");
        t_meet = t_closed;
    }
    return {exp_map(q, {u, v}, t_meet), t_meet};
}

// Whether the ray is still length-minimizing at parameter t. Below the
// horizon this holds by construction; beyond it the ray length is compared
// against the grid oracle within its 2% tolerance.
inline bool is_minimizing(const RaySpec& ray, double t) {
    if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "need t > 0");
    const double speed = geodesic_speed(ray.q, ray.lam);
    if (speed == 0.0) throw Error(ErrorCode::InvalidArgument, "ray needs a nonzero covector");
    const double t_star = minimality_time(ray);
    if (t <= t_star * (1.0 + 1e-12)) return true;
    const double ray_len = t * speed;
    const Point end = exp_map(ray.q, ray.lam, t);
    const double h = std::min(0.005, ray_len / 500.0);
    const double oracle = graph_oracle_distance(ray.q, end, SpaceKind::FullPlane,
                                                GridOracleConfig::for_endpoints(ray.q, end, h));
    return ray_len <= oracle * 1.02;
}

}  // namespace grushin
