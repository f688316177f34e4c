#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "grushin/detail/kernels.hpp"
#include "grushin/errors.hpp"

// Closed-form geometry of the Grushin plane: the plane R^2 carries the frame
// X1 = d/dx, X2 = x d/dy, orthonormal for the singular metric
// dx^2 + dy^2/x^2. Geodesics are projections of the Hamiltonian flow of
// H = (u^2 + x^2 v^2)/2 and admit explicit trigonometric formulas, evaluated
// here through the cancellation-free kernels of detail/kernels.hpp so that
// the v -> 0 continuation (straight horizontal lines) is seamless.

namespace grushin {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

// Initial momentum u dx + v dy at a base point.
struct Covector {
    double u = 0.0;
    double v = 0.0;
};

enum class SpaceKind { FullPlane, HalfPlanePlus, HalfPlaneMinus };

inline const char* to_string(SpaceKind s) {
    switch (s) {
        case SpaceKind::FullPlane: return "plane";
        case SpaceKind::HalfPlanePlus: return "halfplane+";
        case SpaceKind::HalfPlaneMinus: return "halfplane-";
    }
    return "?";
}

// Geodesic t -> exp_q(t lam), t in [0,1].
struct GeodesicSpec {
    Point q;
    Covector lam;
};

inline bool point_in_space(const Point& p, SpaceKind space) {
    switch (space) {
        case SpaceKind::FullPlane: return true;
        case SpaceKind::HalfPlanePlus: return p.x >= 0.0;
        case SpaceKind::HalfPlaneMinus: return p.x <= 0.0;
    }
    return false;
}

inline double hamiltonian(const Point& q, const Covector& lam) {
    return 0.5 * (lam.u * lam.u + q.x * q.x * lam.v * lam.v);
}

// Geodesic speed |dgamma/dt| = sqrt(2H).
inline double geodesic_speed(const Point& q, const Covector& lam) {
    return std::hypot(lam.u, q.x * lam.v);
}

// exp_q(t lam). The y-formula is an exact regrouping of the textbook
// expression into terms that stay finite as v -> 0:
//   y_t = y + (x^2/4)(sin 2tv + 2tv) + u x t g2(2tv) + u^2 t^2 g1(2tv).
inline Point exp_map(const Point& q, const Covector& lam, double t) {
    const double tu = t * lam.u;
    const double tv = t * lam.v;
    const double x = q.x;
    const double xt = x * std::cos(tv) + tu * detail::sinc(tv);
    const double yt = q.y + 0.25 * x * x * (std::sin(2.0 * tv) + 2.0 * tv) +
                      tu * x * detail::g2(2.0 * tv) + tu * tu * detail::g1(2.0 * tv);
    return {xt, yt};
}

// Jacobian determinant of lam -> exp_q(lam) at time 1, regrouped as
//   J = u^2 g3(v) + x(u + x) sinc(v),
// which continues to (u^2 + 3ux + 3x^2)/3 at v = 0.
inline double exp_jacobian(const Point& q, const Covector& lam) {
    const double x = q.x;
    return lam.u * lam.u * detail::g3(lam.v) + x * (lam.u + x) * detail::sinc(lam.v);
}

// 2x2 derivative of lam -> exp_q(lam) at time 1, in (u,v) order. The
// determinant of this matrix equals exp_jacobian (tested).
struct ExpDifferential {
    double dxu, dxv, dyu, dyv;
    double det() const { return dxu * dyv - dxv * dyu; }
};

inline ExpDifferential exp_differential(const Point& q, const Covector& lam) {
    const double x = q.x, u = lam.u, v = lam.v;
    const double cv = std::cos(v);
    ExpDifferential d;
    d.dxu = detail::sinc(v);
    d.dxv = -x * std::sin(v) - u * v * detail::g3(v);
    d.dyu = x * detail::g2(2.0 * v) + 2.0 * u * detail::g1(2.0 * v);
    d.dyv = x * x * cv * cv + 2.0 * u * x * detail::g2p(2.0 * v) + 2.0 * u * u * detail::g1p(2.0 * v);
    return d;
}

namespace detail {
// Slack for the half-plane endpoint condition; |v| < pi stays exact.
inline constexpr double kEndpointSlack = 1e-12;
}  // namespace detail

// Membership in the cotangent injectivity domain D_q (full plane: H != 0 and
// |v| < pi) or D_q^{+/-} (additionally the geodesic endpoint at t = 1 stays
// in the closed half-plane, which is equivalent to the whole path staying).
inline bool in_injectivity_domain(const Point& q, const Covector& lam, SpaceKind space) {
    if (!point_in_space(q, space))
        throw Error(ErrorCode::BasePointOutsideSpace,
                    "base point violates the half-plane constraint");
    if (hamiltonian(q, lam) == 0.0) return false;
    if (!(std::abs(lam.v) < std::numbers::pi)) return false;
    if (space == SpaceKind::FullPlane) return true;
    const double sign = (space == SpaceKind::HalfPlanePlus) ? 1.0 : -1.0;
    const Point end = exp_map(q, lam, 1.0);
    return sign * end.x >= -detail::kEndpointSlack;
}

inline std::vector<Point> geodesic_samples(const GeodesicSpec& spec, int n) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 samples");
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        out.push_back(exp_map(spec.q, spec.lam, static_cast<double>(i) / (n - 1)));
    out.front() = spec.q;
    return out;
}

// The anisotropic dilation (x,y) -> (eps x, eps^2 y) scales the Grushin
// distance by eps and the Lebesgue measure by eps^3.
inline Point dilate(const Point& p, double eps) {
    if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "dilation factor must be positive");
    return {eps * p.x, eps * eps * p.y};
}

inline Point reflect_x(const Point& p) { return {-p.x, p.y}; }

inline Point translate_y(const Point& p, double c) { return {p.x, p.y + c}; }

}  // namespace grushin
