#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <queue>
#include <vector>

#include "grushin/core.hpp"
#include "grushin/errors.hpp"

// Geodesic distance on the Grushin plane and half-planes. Inside the
// injectivity domain the distance is sqrt(2H) of the covector found by
// damped multi-start Newton inversion of the exponential map. Targets on the
// cut locus (a measure-zero set) are handled by a boundary-limit sweep along
// |v| -> pi with Richardson extrapolation. An independent Dijkstra oracle on
// an 8-connected grid, with exact per-segment lengths and a local polyline
// refinement pass, provides upper bounds for cross-validation and a final
// fallback.

namespace grushin {

enum class DistanceStatus { Unique, CutPoint, OracleOnly };
enum class DistanceMethod { Newton, Graph };

inline const char* to_string(DistanceStatus s) {
    switch (s) {
        case DistanceStatus::Unique: return "unique";
        case DistanceStatus::CutPoint: return "cut_point";
        case DistanceStatus::OracleOnly: return "oracle_only";
    }
    return "?";
}

inline const char* to_string(DistanceMethod m) {
    return m == DistanceMethod::Newton ? "newton" : "graph";
}

struct DistanceResult {
    double value = 0.0;
    std::optional<Covector> witness;
    DistanceStatus status = DistanceStatus::Unique;
    DistanceMethod method = DistanceMethod::Newton;
};

struct BBox {
    double xmin = -1.0, xmax = 1.0, ymin = -1.0, ymax = 1.0;
};

enum class AxisPolicy { InfiniteVerticalCostOnAxis };

struct GridOracleConfig {
    double h = 0.01;
    BBox bbox;
    AxisPolicy axis_policy = AxisPolicy::InfiniteVerticalCostOnAxis;
    // Polyline refinement of the Dijkstra path (coordinate-descent
    // shortening with exact segment lengths). 0 sweeps returns the raw grid
    // value, whose error is dominated by direction quantization.
    int refine_sweeps = 60;
    int refine_vertices = 56;

    static GridOracleConfig for_endpoints(const Point& q, const Point& p, double h);
};

namespace detail {

// Cheap admissible-path upper bound for d(q,p): horizontal travel plus, when
// needed, a vertical detour at the optimal column x* = sqrt(|dy|/2).
inline double admissible_upper_bound(const Point& q, const Point& p) {
    const double dx = std::abs(q.x - p.x);
    const double dy = std::abs(q.y - p.y);
    if (dy == 0.0) return dx;
    const double xm = std::max(std::abs(q.x), std::abs(p.x));
    const double xstar = std::sqrt(0.5 * dy);
    const double vert = (xstar <= xm) ? dy / xm : 2.0 * std::sqrt(2.0 * dy) - 2.0 * xm;
    return dx + vert;
}

struct NewtonOutcome {
    Covector lam;
    double resid = std::numeric_limits<double>::infinity();
    bool converged = false;
};

inline double target_residual(const Point& q, const Covector& lam, const Point& p) {
    const Point e = exp_map(q, lam, 1.0);
    return std::hypot(e.x - p.x, e.y - p.y);
}

// Damped Newton on exp_q(lam) = p with the closed-form differential.
// Backtracking halves the step up to 40 times; v is kept inside (-pi, pi).
inline NewtonOutcome newton_from_seed(const Point& q, const Point& p, Covector lam) {
    constexpr double kVClamp = std::numbers::pi - 1e-9;
    auto clamp_v = [&](double v) { return std::clamp(v, -kVClamp, kVClamp); };
    lam.v = clamp_v(lam.v);
    double resid = target_residual(q, lam, p);
    for (int it = 0; it < 80 && resid >= 1e-12; ++it) {
        const Point e = exp_map(q, lam, 1.0);
        const double rx = e.x - p.x, ry = e.y - p.y;
        const ExpDifferential d = exp_differential(q, lam);
        const double det = d.det();
        if (det == 0.0 || !std::isfinite(det)) break;
        const double du = -(d.dyv * rx - d.dxv * ry) / det;
        const double dv = -(-d.dyu * rx + d.dxu * ry) / det;
        double step = 1.0;
        Covector cand = lam;
        double cand_resid = resid;
        for (int bt = 0; bt < 40; ++bt) {
            Covector trial{lam.u + step * du, clamp_v(lam.v + step * dv)};
            const double r = target_residual(q, trial, p);
            if (r < resid) {
                cand = trial;
                cand_resid = r;
                break;
            }
            step *= 0.5;
        }
        if (cand_resid >= resid) break;  // stalled
        lam = cand;
        resid = cand_resid;
    }
    return {lam, resid, resid <= 1e-10};
}

// Multi-start Newton inversion. Seeds are ranked by residual on a 64x64 grid
// over (u,v) in [-R,R] x (-pi,pi) with R = 4 * admissible upper bound; an
// optional hint (e.g. the solution for a nearby target) is tried first.
inline NewtonOutcome invert_multistart(const Point& q, const Point& p, SpaceKind space,
                                       const Covector* hint = nullptr) {
    auto acceptable = [&](const NewtonOutcome& n) {
        return n.converged && std::abs(n.lam.v) < std::numbers::pi &&
               hamiltonian(q, n.lam) > 0.0 && in_injectivity_domain(q, n.lam, space);
    };
    NewtonOutcome best;
    if (hint != nullptr) {
        best = newton_from_seed(q, p, *hint);
        if (acceptable(best)) return best;
    }
    const double R = 4.0 * (admissible_upper_bound(q, p) + 0.05);
    constexpr int kGrid = 64;
    struct Seed {
        double resid;
        Covector lam;
    };
    std::vector<Seed> seeds;
    seeds.reserve(kGrid * kGrid + 1);
    seeds.push_back({target_residual(q, {p.x - q.x, 0.0}, p), {p.x - q.x, 0.0}});
    for (int i = 0; i < kGrid; ++i) {
        const double u = -R + 2.0 * R * (i + 0.5) / kGrid;
        for (int j = 0; j < kGrid; ++j) {
            const double v = (-std::numbers::pi + 1e-6) +
                             (2.0 * std::numbers::pi - 2e-6) * (j + 0.5) / kGrid;
            seeds.push_back({target_residual(q, {u, v}, p), {u, v}});
        }
    }
    std::sort(seeds.begin(), seeds.end(),
              [](const Seed& a, const Seed& b) { return a.resid < b.resid; });
    const int tries = std::min<int>(48, static_cast<int>(seeds.size()));
    for (int k = 0; k < tries; ++k) {
        NewtonOutcome n = newton_from_seed(q, p, seeds[k].lam);
        if (acceptable(n)) return n;
        if (n.resid < best.resid) best = n;
    }
    best.converged = false;
    return best;
}

struct BoundaryLimit {
    double length = std::numeric_limits<double>::infinity();
    double resid = std::numeric_limits<double>::infinity();
    Covector lam;      // limiting covector, |v| = pi
    bool valid = false;
};

// Distance to targets in the closure of exp_q(D_q) but not in the image: the
// infimum over covectors approaching the domain boundary |v| = pi. For each
// v_k = pi(1 - 10^-k), k = 4..9, the residual is minimized over u (coarse
// grid + golden section, restricted to the space's domain); the lengths are
// Richardson-extrapolated in 10^-k.
inline BoundaryLimit boundary_limit(const Point& q, const Point& p, SpaceKind space) {
    const double R = 4.0 * (admissible_upper_bound(q, p) + 0.05);
    const double resid_tol = 1e-6 * std::max(1.0, admissible_upper_bound(q, p));
    BoundaryLimit best;
    for (const double sign : {1.0, -1.0}) {
        double len_prev = 0.0, len_last = 0.0, resid_last = 0.0, u_last = 0.0;
        for (int k = 4; k <= 9; ++k) {
            const double v = sign * std::numbers::pi * (1.0 - std::pow(10.0, -k));
            auto resid_at = [&](double u) {
                Covector lam{u, v};
                if (!in_injectivity_domain(q, lam, space))
                    return std::numeric_limits<double>::infinity();
                return target_residual(q, lam, p);
            };
            constexpr int kCoarse = 257;
            double bu = 0.0, br = std::numeric_limits<double>::infinity();
            for (int i = 0; i < kCoarse; ++i) {
                const double u = -R + 2.0 * R * i / (kCoarse - 1);
                const double r = resid_at(u);
                if (r < br) {
                    br = r;
                    bu = u;
                }
            }
            double lo = bu - 2.0 * R / (kCoarse - 1), hi = bu + 2.0 * R / (kCoarse - 1);
            constexpr double phi = 0.6180339887498949;
            double u1 = hi - phi * (hi - lo), u2 = lo + phi * (hi - lo);
            double f1 = resid_at(u1), f2 = resid_at(u2);
            for (int it = 0; it < 70; ++it) {
                if (f1 < f2) {
                    hi = u2; u2 = u1; f2 = f1;
                    u1 = hi - phi * (hi - lo);
                    f1 = resid_at(u1);
                } else {
                    lo = u1; u1 = u2; f1 = f2;
                    u2 = lo + phi * (hi - lo);
                    f2 = resid_at(u2);
                }
            }
            u_last = (f1 < f2) ? u1 : u2;
            len_prev = len_last;
            len_last = geodesic_speed(q, {u_last, v});
            resid_last = std::min(f1, f2);
        }
        if (resid_last > resid_tol) continue;
        // first-order Richardson in delta = 10^-k over the last two levels
        const double extr = len_last + (len_last - len_prev) / 9.0;
        if (!best.valid || extr < best.length) {
            best.length = extr;
            best.resid = resid_last;
            best.lam = {u_last, sign * std::numbers::pi};
            best.valid = true;
        }
    }
    return best;
}

// --- exact polyline geometry ---------------------------------------------

// Grushin length of the straight segment a->b: for dx != 0 the closed form
// int sqrt(1 + k^2/x^2) dx with k = |dy/dx|, computed as a stable difference
// (log1p form) so nearly-vertical segments do not cancel. Segments that touch
// or cross the axis with dy != 0 have infinite length (no admissible curve
// moves vertically at x = 0).
inline double segment_length(const Point& a, const Point& b) {
    const double dx = b.x - a.x, dy = b.y - a.y;
    if (dy == 0.0) return std::abs(dx);
    const bool a_on = (a.x == 0.0), b_on = (b.x == 0.0);
    if (a_on || b_on || ((a.x < 0.0) != (b.x < 0.0)))
        return std::numeric_limits<double>::infinity();
    const double xa = std::abs(a.x), xb = std::abs(b.x);
    if (dx == 0.0) return std::abs(dy) / xa;
    const double k = std::abs(dy / dx);
    const double ra = std::hypot(xa, k), rb = std::hypot(xb, k);
    const double dsqrt = (xb - xa) * (xb + xa) / (rb + ra);
    const double num = k * (xa - xb) * (1.0 + k * (xa + xb) / (xa * rb + xb * ra));
    const double dasinh = std::log1p(num / (xb * (k + ra)));
    return std::abs(dsqrt - k * dasinh);
}

inline double polyline_length(const std::vector<Point>& path) {
    double L = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) L += segment_length(path[i], path[i + 1]);
    return L;
}

// Shortens a polyline in place by per-vertex golden-section descent along
// each coordinate, keeping endpoints fixed. Every accepted move strictly
// decreases the exact length, so the result stays an upper bound of d.
inline void smooth_polyline(std::vector<Point>& path, int sweeps, double span, SpaceKind space) {
    if (path.size() < 3) return;
    constexpr double phi = 0.6180339887498949;
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        for (std::size_t i = 1; i + 1 < path.size(); ++i) {
            const Point& a = path[i - 1];
            const Point& c = path[i + 1];
            for (int axis = 0; axis < 2; ++axis) {
                Point& b = path[i];
                auto cost = [&](double val) {
                    Point t = b;
                    (axis == 0 ? t.x : t.y) = val;
                    return segment_length(a, t) + segment_length(t, c);
                };
                const double cur = (axis == 0 ? b.x : b.y);
                double lo = cur - span, hi = cur + span;
                if (axis == 0) {
                    if (space == SpaceKind::HalfPlanePlus) lo = std::max(lo, 0.0);
                    if (space == SpaceKind::HalfPlaneMinus) hi = std::min(hi, 0.0);
                }
                double v1 = hi - phi * (hi - lo), v2 = lo + phi * (hi - lo);
                double f1 = cost(v1), f2 = cost(v2);
                for (int it = 0; it < 28; ++it) {
                    if (f1 < f2) {
                        hi = v2; v2 = v1; f2 = f1;
                        v1 = hi - phi * (hi - lo);
                        f1 = cost(v1);
                    } else {
                        lo = v1; v1 = v2; f1 = f2;
                        v2 = lo + phi * (hi - lo);
                        f2 = cost(v2);
                    }
                }
                const double bestv = (f1 < f2) ? v1 : v2;
                if (cost(bestv) < cost(cur)) (axis == 0 ? b.x : b.y) = bestv;
            }
        }
        span = std::max(0.7 * span, 0.02);
    }
}

// Resamples the polyline to ~target vertices, uniformly by Euclidean
// arclength within each section between protected vertices. Protected are
// the endpoints and both ends of any segment touching or crossing the axis,
// so resampled chords never acquire an inadmissible axis crossing (each
// section stays strictly on one side of x = 0).
inline std::vector<Point> redistribute_polyline(const std::vector<Point>& path, int target) {
    const std::size_t n = path.size();
    if (n < 3) return path;
    std::vector<char> prot(n, 0);
    prot.front() = prot.back() = 1;
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (path[i].x * path[i + 1].x <= 0.0) prot[i] = prot[i + 1] = 1;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) total += std::hypot(path[i + 1].x - path[i].x,
                                                                path[i + 1].y - path[i].y);
    if (total <= 0.0) return path;
    std::vector<Point> out;
    out.push_back(path.front());
    std::size_t a = 0;
    while (a + 1 < n) {
        std::size_t b = a + 1;
        while (b + 1 < n && !prot[b]) ++b;
        std::vector<double> cum(b - a + 1, 0.0);
        for (std::size_t i = a; i < b; ++i)
            cum[i - a + 1] = cum[i - a] + std::hypot(path[i + 1].x - path[i].x,
                                                     path[i + 1].y - path[i].y);
        const double sec_len = cum.back();
        if (sec_len > 0.0) {
            const int pieces = std::max(1, static_cast<int>(std::lround(target * sec_len / total)));
            std::size_t j = 0;
            for (int k = 1; k < pieces; ++k) {
                const double s = sec_len * k / pieces;
                while (j + 1 < cum.size() - 1 && cum[j + 1] < s) ++j;
                const double seg = cum[j + 1] - cum[j];
                const double frac = seg > 0.0 ? (s - cum[j]) / seg : 0.0;
                const Point& A = path[a + j];
                const Point& B = path[a + j + 1];
                out.push_back({A.x + frac * (B.x - A.x), A.y + frac * (B.y - A.y)});
            }
        }
        out.push_back(path[b]);
        a = b;
    }
    return out;
}

// Replaces infinite segments (introduced by endpoint unsnapping) with finite
// detours: horizontal to the axis, horizontal past it, vertical to the node.
inline void repair_polyline(std::vector<Point>& path) {
    for (std::size_t i = 0; i + 1 < path.size();) {
        const Point a = path[i], b = path[i + 1];
        if (std::isfinite(segment_length(a, b))) {
            ++i;
            continue;
        }
        std::vector<Point> ins;
        if (a.x == 0.0 && b.x != 0.0) {
            ins.push_back({b.x, a.y});
        } else if (b.x == 0.0 && a.x != 0.0) {
            ins.push_back({a.x, b.y});
        } else if (a.x != 0.0 && b.x != 0.0) {
            ins.push_back({0.0, a.y});
            ins.push_back({b.x, a.y});
        } else {
            ++i;  // both exactly on the axis: leave for the caller's fallback
            continue;
        }
        path.insert(path.begin() + static_cast<std::ptrdiff_t>(i) + 1, ins.begin(), ins.end());
        i += ins.size() + 1;
    }
}

inline std::vector<Point> subdivide_polyline(const std::vector<Point>& path) {
    std::vector<Point> out;
    out.reserve(path.size() * 2);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        out.push_back(path[i]);
        out.push_back({0.5 * (path[i].x + path[i + 1].x), 0.5 * (path[i].y + path[i + 1].y)});
    }
    out.push_back(path.back());
    return out;
}

}  // namespace detail

inline GridOracleConfig GridOracleConfig::for_endpoints(const Point& q, const Point& p, double h) {
    GridOracleConfig cfg;
    cfg.h = h;
    const double dx = std::abs(q.x - p.x), dy = std::abs(q.y - p.y);
    const double pad_x = std::max(1.0, 0.9 * std::sqrt(dx + dy));
    const double pad_y = std::max(0.5, 0.5 * (dx + std::sqrt(dy)));
    cfg.bbox = {std::min(q.x, p.x) - pad_x, std::max(q.x, p.x) + pad_x,
                std::min(q.y, p.y) - pad_y, std::max(q.y, p.y) + pad_y};
    return cfg;
}

// Inverse of the exponential map: the unique lam in D_q (resp. D_q^{+/-})
// with exp_q(lam) = p, or CutLocusPoint / NotInImage.
inline Covector invert_exp(const Point& q, const Point& p, SpaceKind space) {
    if (!point_in_space(p, space) || !point_in_space(q, space))
        throw Error(ErrorCode::BasePointOutsideSpace, "endpoint outside the space");
    if (p.x == q.x && p.y == q.y)
        throw Error(ErrorCode::InvalidArgument, "invert_exp requires p != q");
    const detail::NewtonOutcome n = detail::invert_multistart(q, p, space);
    if (n.converged) return n.lam;
    const detail::BoundaryLimit bl = detail::boundary_limit(q, p, space);
    if (bl.valid)
        throw Error(ErrorCode::CutLocusPoint, "target lies on the cut locus of the base point");
    throw Error(ErrorCode::NotInImage, "no covector maps onto the target");
}

inline double graph_oracle_distance(const Point& q, const Point& p, SpaceKind space,
                                    const GridOracleConfig& cfg);

inline DistanceResult distance(const Point& q, const Point& p, SpaceKind space) {
    if (!point_in_space(q, space) || !point_in_space(p, space))
        throw Error(ErrorCode::BasePointOutsideSpace, "endpoint outside the space");
    if (p.x == q.x && p.y == q.y) return {0.0, std::nullopt, DistanceStatus::Unique,
                                          DistanceMethod::Newton};
    const detail::NewtonOutcome n = detail::invert_multistart(q, p, space);
    if (n.converged)
        return {geodesic_speed(q, n.lam), n.lam, DistanceStatus::Unique, DistanceMethod::Newton};
    const detail::BoundaryLimit bl = detail::boundary_limit(q, p, space);
    if (bl.valid)
        return {bl.length, bl.lam, DistanceStatus::CutPoint, DistanceMethod::Newton};
    const double d = graph_oracle_distance(q, p, space, GridOracleConfig::for_endpoints(q, p, 0.005));
    return {d, std::nullopt, DistanceStatus::OracleOnly, DistanceMethod::Graph};
}

// Dijkstra over the 8-connected grid with exact segment lengths as edge
// weights (vertical motion on the column x = 0 is automatically forbidden:
// its exact cost is infinite). The optional refinement pass shortens the
// returned path by local descent; both stages measure true admissible-curve
// lengths, so the result is an upper approximation of d converging as h -> 0.
inline double graph_oracle_distance(const Point& q, const Point& p, SpaceKind space,
                                    const GridOracleConfig& cfg) {
    if (!point_in_space(q, space) || !point_in_space(p, space))
        throw Error(ErrorCode::BasePointOutsideSpace, "endpoint outside the space");
    const double h = cfg.h;
    if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid spacing must be positive");
    BBox bb = cfg.bbox;
    bb.xmin = std::min(bb.xmin, std::min(q.x, p.x) - 2.0 * h);
    bb.xmax = std::max(bb.xmax, std::max(q.x, p.x) + 2.0 * h);
    bb.ymin = std::min(bb.ymin, std::min(q.y, p.y) - 2.0 * h);
    bb.ymax = std::max(bb.ymax, std::max(q.y, p.y) + 2.0 * h);
    if (space == SpaceKind::HalfPlanePlus) bb.xmin = 0.0;
    if (space == SpaceKind::HalfPlaneMinus) bb.xmax = 0.0;

    // snap to multiples of h so that x = 0 is a grid column
    const long i0 = static_cast<long>(std::floor(bb.xmin / h));
    const long i1 = static_cast<long>(std::ceil(bb.xmax / h));
    const long j0 = static_cast<long>(std::floor(bb.ymin / h));
    const long j1 = static_cast<long>(std::ceil(bb.ymax / h));
    const long nx = i1 - i0 + 1, ny = j1 - j0 + 1;
    if (nx < 2 || ny < 2 || nx * ny > 8'000'000)
        throw Error(ErrorCode::InvalidArgument, "grid too large; increase h or shrink the bbox");
    auto node = [&](long i, long j) { return (i - i0) * ny + (j - j0); };
    auto coord = [&](long n) {
        const long i = n / ny + i0, j = n % ny + j0;
        return Point{i * h, j * h};
    };
    auto snap = [&](const Point& a) {
        const long i = std::clamp(static_cast<long>(std::lround(a.x / h)), i0, i1);
        const long j = std::clamp(static_cast<long>(std::lround(a.y / h)), j0, j1);
        return node(i, j);
    };
    const long start = snap(q), goal = snap(p);

    std::vector<double> dist(static_cast<std::size_t>(nx * ny),
                             std::numeric_limits<double>::infinity());
    std::vector<long> prev(static_cast<std::size_t>(nx * ny), -1);
    using QE = std::pair<double, long>;  // ties broken by node index
    std::priority_queue<QE, std::vector<QE>, std::greater<QE>> pq;
    dist[static_cast<std::size_t>(start)] = 0.0;
    pq.push({0.0, start});
    const long di[8] = {-1, -1, -1, 0, 0, 1, 1, 1};
    const long dj[8] = {-1, 0, 1, -1, 1, -1, 0, 1};
    while (!pq.empty()) {
        const auto [d, n] = pq.top();
        pq.pop();
        if (n == goal) break;
        if (d > dist[static_cast<std::size_t>(n)]) continue;
        const long i = n / ny + i0, j = n % ny + j0;
        const Point a = coord(n);
        for (int k = 0; k < 8; ++k) {
            const long i2 = i + di[k], j2 = j + dj[k];
            if (i2 < i0 || i2 > i1 || j2 < j0 || j2 > j1) continue;
            const long n2 = node(i2, j2);
            const double w = detail::segment_length(a, {i2 * h, j2 * h});
            if (!std::isfinite(w)) continue;
            const double nd = d + w;
            if (nd < dist[static_cast<std::size_t>(n2)] - 1e-15) {
                dist[static_cast<std::size_t>(n2)] = nd;
                prev[static_cast<std::size_t>(n2)] = n;
                pq.push({nd, n2});
            }
        }
    }
    if (!std::isfinite(dist[static_cast<std::size_t>(goal)]))
        throw Error(ErrorCode::Unreachable, "target not reachable within the bbox");
    if (cfg.refine_sweeps <= 0) return dist[static_cast<std::size_t>(goal)];

    std::vector<Point> path;
    for (long n = goal; n != -1; n = prev[static_cast<std::size_t>(n)]) path.push_back(coord(n));
    std::reverse(path.begin(), path.end());

    // restore the exact (unsnapped) endpoints, then mend any segment the
    // unsnapping made inadmissible
    path.front() = q;
    path.back() = p;
    detail::repair_polyline(path);

    const double raw = dist[static_cast<std::size_t>(goal)];
    double best = raw;
    // Alternate arclength redistribution (to break out of grid-staircase
    // local minima) with descent sweeps; each iterate is an admissible
    // polyline measured exactly, so the minimum stays an upper bound of d.
    double span = std::max(8.0 * h, 0.12 * raw);
    for (int round = 0; round < 4; ++round) {
        path = detail::redistribute_polyline(path, cfg.refine_vertices * (round < 2 ? 1 : 2));
        if (!std::isfinite(detail::polyline_length(path))) break;
        detail::smooth_polyline(path, cfg.refine_sweeps, span, space);
        best = std::min(best, detail::polyline_length(path));
        span = std::max(0.5 * span, 4.0 * h);
    }
    return best;
}

}  // namespace grushin
