#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "grushin/core.hpp"
#include "grushin/detail/parallel.hpp"
#include "grushin/distance.hpp"
#include "grushin/errors.hpp"

// MCP(0,N) verification for the Grushin plane and half-planes. The measure
// contraction inequality m(phi_t(A)) >= t^N m(A) reduces to the Jacobian
// ratio bound J(x,y,tu,tv)/J(x,y,u,v) >= t^{N-2} over the injectivity
// domain, and further to a pointwise condition on the log-derivative of the
// Jacobian along rays. Three branches cover the domain:
//
//   v = 0 (horizontal rays):   N(u,x) = (4u^2 + 9xu + 6x^2)/(u^2 + 3xu + 3x^2)
//   u = 0 (returning rays):    N(v)   = 1 + v cot v
//   general (a = vx/u):        N(a,v) = 1 + v f_a'(v)/f_a(v),
//                              f_a(v) = (1 + av + a^2) sin v - v cos v
//
// All three are invariant under the dilation (x,y) -> (eps x, eps^2 y), so
// scans sample the ratio u/x and the pair (a, v). The half-plane constraint
// u >= -x caps the first branch at 4 (approached as u -> +infinity); on the
// full plane horizontal rays crossing the axis attain 5 at u = -3x.

namespace grushin {

enum class BranchTag { VZero, UZero, General };

inline const char* to_string(BranchTag b) {
    switch (b) {
        case BranchTag::VZero: return "v_zero";
        case BranchTag::UZero: return "u_zero";
        case BranchTag::General: return "general";
    }
    return "?";
}

struct RatioPoint {
    Point q;
    Covector lam;
    double t = 1.0;
    std::optional<double> a;  // slope variable vx/u, when u != 0
};

struct CoeffTriple {
    double c0, c1, c2;
};

struct ScanConfig {
    std::vector<double> x_grid;  // base abscissas (positive; results are x-invariant)
    std::vector<double> u_grid;  // magnitudes of the ratio u/x, log-spaced; both signs scanned
    std::vector<double> v_grid;  // v values in (0, pi)
    std::vector<double> t_grid;  // contraction parameters in (0, 1)
    double tol = 1e-3;
    int jobs = 0;

    static ScanConfig defaults();
};

struct ScanReport {
    double n_min = 0.0;
    RatioPoint witness;  // reported at the canonical base point x = 1
    BranchTag witness_branch = BranchTag::VZero;
    std::map<BranchTag, double> branch_sups;
    long samples = 0;
    bool attained = false;                  // false: supremum approached at a grid edge
    std::optional<double> analytic_limit;   // branch limit when approached
    double estimator_n_min = 0.0;           // direct t-grid estimator cross-check
};

struct Witness {
    Point q;
    Covector lam;
    double t = 1.0;
    double pointwise_n = 0.0;
};

struct VerifyResult {
    bool ok = false;
    std::optional<Witness> witness;
};

namespace detail {

inline double n_vzero_xu(double x, double u) {
    return (4.0 * u * u + 9.0 * x * u + 6.0 * x * x) / (u * u + 3.0 * x * u + 3.0 * x * x);
}

inline double n_vzero(double rho) { return n_vzero_xu(1.0, rho); }

inline double n_uzero(double v) { return 1.0 + v * std::cos(v) / std::sin(v); }

inline double f_a(double a, double v) { return v * v * v * g3(v) + a * (v + a) * std::sin(v); }

inline double f_a_prime(double a, double v) {
    return (a + v) * (std::sin(v) + a * std::cos(v));
}

inline double n_general(double a, double v) {
    return 1.0 + v * f_a_prime(a, v) / f_a(a, v);
}

// Half-plane admissibility of scale-invariant branch parameters: the
// endpoint condition at the canonical base point x = 1.
inline bool plus_ok_vzero(double rho) { return rho >= -1.0 - kEndpointSlack; }
inline bool plus_ok_uzero(double v) { return std::cos(v) >= -kEndpointSlack; }
inline bool plus_ok_general(double rho, double v) {
    return std::cos(v) + rho * sinc(v) >= -kEndpointSlack;
}

}  // namespace detail

// J(x,y,tu,tv)/J(x,y,u,v) for t in (0,1]. The domain check is against the
// full-plane D_q; half-plane restrictions only shrink the domain and leave
// the value unchanged.
inline double jacobian_ratio(const Point& q, const Covector& lam, double t) {
    if (!(t > 0.0 && t <= 1.0))
        throw Error(ErrorCode::DomainError, "jacobian_ratio needs t in (0,1]");
    if (!in_injectivity_domain(q, lam, SpaceKind::FullPlane))
        throw Error(ErrorCode::DomainError, "covector outside the injectivity domain");
    return exp_jacobian(q, {t * lam.u, t * lam.v}) / exp_jacobian(q, lam);
}

// Least N for which the pointwise (integrand) form of the ratio inequality
// holds at (q, lam).
inline double pointwise_N(const Point& q, const Covector& lam, SpaceKind space) {
    if (!in_injectivity_domain(q, lam, space))
        throw Error(ErrorCode::DomainError, "covector outside the injectivity domain");
    const double x = (space == SpaceKind::HalfPlaneMinus) ? -q.x : q.x;
    const double u = (space == SpaceKind::HalfPlaneMinus) ? -lam.u : lam.u;
    const double v = std::abs(lam.v);
    if (lam.v == 0.0) return detail::n_vzero_xu(x, u);
    if (lam.u == 0.0) return detail::n_uzero(v);
    return detail::n_general(v * x / u, v);
}

inline ScanConfig ScanConfig::defaults() {
    ScanConfig cfg;
    cfg.x_grid = {0.1, 1.0, 10.0};
    const int nu = 1200;
    cfg.u_grid.reserve(nu);
    for (int i = 0; i < nu; ++i)
        cfg.u_grid.push_back(std::pow(10.0, -3.0 + 7.0 * i / (nu - 1)));
    const int nv = 600;
    cfg.v_grid.reserve(nv + 100);
    const double vmin = 1e-4, vmax = std::numbers::pi - 1e-4;
    for (int i = 0; i < nv; ++i)
        cfg.v_grid.push_back(vmin + (vmax - vmin) * i / (nv - 1));
    for (int i = 0; i < 100; ++i)
        cfg.v_grid.push_back(std::pow(10.0, -4.0 + 3.5 * i / 99.0));
    std::sort(cfg.v_grid.begin(), cfg.v_grid.end());
    for (double t = 0.05; t < 0.951; t += 0.05) cfg.t_grid.push_back(t);
    for (int j = 1; j <= 8; ++j) cfg.t_grid.push_back(1.0 - std::pow(10.0, -j));
    for (int j = 2; j <= 6; ++j) cfg.t_grid.push_back(std::pow(10.0, -j));
    std::sort(cfg.t_grid.begin(), cfg.t_grid.end());
    return cfg;
}

namespace detail {

struct BranchArgmax {
    double val = -std::numeric_limits<double>::infinity();
    double rho = 0.0;  // VZero/General
    double v = 0.0;    // UZero/General
    bool at_edge = false;
};

template <typename DomainOk>
inline BranchArgmax scan_vzero(const std::vector<double>& mags, DomainOk&& ok) {
    BranchArgmax best;
    for (const double sign : {1.0, -1.0}) {
        for (std::size_t i = 0; i < mags.size(); ++i) {
            const double rho = sign * mags[i];
            if (!ok(rho)) continue;
            const double val = n_vzero(rho);
            if (val > best.val) {
                best = {val, rho, 0.0, i + 1 == mags.size()};
            }
        }
    }
    // local golden-section polish around the argmax (log scale in |rho|)
    if (!best.at_edge) {
        const double sign = best.rho < 0.0 ? -1.0 : 1.0;
        double lo = std::log(std::abs(best.rho)) - 0.05, hi = std::log(std::abs(best.rho)) + 0.05;
        constexpr double phi = 0.6180339887498949;
        auto val_at = [&](double lr) {
            const double rho = sign * std::exp(lr);
            return ok(rho) ? n_vzero(rho) : -std::numeric_limits<double>::infinity();
        };
        double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
        double fa_ = val_at(a), fb_ = val_at(b);
        for (int it = 0; it < 90; ++it) {
            if (fa_ > fb_) {
                hi = b; b = a; fb_ = fa_;
                a = hi - phi * (hi - lo);
                fa_ = val_at(a);
            } else {
                lo = a; a = b; fa_ = fb_;
                b = lo + phi * (hi - lo);
                fb_ = val_at(b);
            }
        }
        const double lr = (fa_ > fb_) ? a : b;
        if (val_at(lr) > best.val) {
            best.val = val_at(lr);
            best.rho = sign * std::exp(lr);
        }
    }
    return best;
}

}  // namespace detail

inline ScanReport scan_min_N(SpaceKind space, const ScanConfig& cfg) {
    if (cfg.u_grid.empty() || cfg.v_grid.empty() || cfg.t_grid.empty() || cfg.x_grid.empty())
        throw Error(ErrorCode::InvalidArgument, "scan grids must be nonempty");
    const bool plane = (space == SpaceKind::FullPlane);
    const bool minus = (space == SpaceKind::HalfPlaneMinus);

    auto vzero_ok = [&](double rho) {
        return rho != 0.0 && (plane || detail::plus_ok_vzero(rho));
    };
    detail::BranchArgmax vz = detail::scan_vzero(cfg.u_grid, vzero_ok);

    detail::BranchArgmax uz;
    for (std::size_t i = 0; i < cfg.v_grid.size(); ++i) {
        const double v = cfg.v_grid[i];
        if (!plane && !detail::plus_ok_uzero(v)) continue;
        const double val = detail::n_uzero(v);
        if (val > uz.val) uz = {val, 0.0, v, i == 0};
    }

    detail::BranchArgmax gen;
    {
        std::size_t edge_i = cfg.u_grid.size() - 1;
        for (const double sign : {1.0, -1.0}) {
            for (std::size_t i = 0; i < cfg.u_grid.size(); ++i) {
                const double rho = sign * cfg.u_grid[i];
                for (std::size_t j = 0; j < cfg.v_grid.size(); ++j) {
                    const double v = cfg.v_grid[j];
                    if (!plane && !detail::plus_ok_general(rho, v)) continue;
                    const double val = detail::n_general(v / rho, v);
                    if (val > gen.val) gen = {val, rho, v, i == edge_i || j == 0};
                }
            }
        }
        if (!gen.at_edge) {
            // alternate 1D golden polish in rho and v
            constexpr double phi = 0.6180339887498949;
            auto val_at = [&](double rho, double v) {
                if (!(v > 0.0 && v < std::numbers::pi) || rho == 0.0)
                    return -std::numeric_limits<double>::infinity();
                if (!plane && !detail::plus_ok_general(rho, v))
                    return -std::numeric_limits<double>::infinity();
                return detail::n_general(v / rho, v);
            };
            for (int round = 0; round < 3; ++round) {
                for (int axis = 0; axis < 2; ++axis) {
                    const double center = (axis == 0) ? gen.rho : gen.v;
                    const double w = (axis == 0) ? 0.1 * std::abs(center) : 0.02;
                    double lo = center - w, hi = center + w;
                    auto f = [&](double s) {
                        return axis == 0 ? val_at(s, gen.v) : val_at(gen.rho, s);
                    };
                    double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
                    double fa_ = f(a), fb_ = f(b);
                    for (int it = 0; it < 70; ++it) {
                        if (fa_ > fb_) {
                            hi = b; b = a; fb_ = fa_;
                            a = hi - phi * (hi - lo);
                            fa_ = f(a);
                        } else {
                            lo = a; a = b; fa_ = fb_;
                            b = lo + phi * (hi - lo);
                            fb_ = f(b);
                        }
                    }
                    const double s = (fa_ > fb_) ? a : b;
                    if (f(s) > gen.val) {
                        gen.val = f(s);
                        (axis == 0 ? gen.rho : gen.v) = s;
                    }
                }
            }
        }
    }

    ScanReport rep;
    rep.branch_sups[BranchTag::VZero] = vz.val;
    rep.branch_sups[BranchTag::UZero] = uz.val;
    rep.branch_sups[BranchTag::General] = gen.val;
    const detail::BranchArgmax* best = &vz;
    rep.witness_branch = BranchTag::VZero;
    if (uz.val > best->val) {
        best = &uz;
        rep.witness_branch = BranchTag::UZero;
    }
    if (gen.val > best->val) {
        best = &gen;
        rep.witness_branch = BranchTag::General;
    }
    rep.n_min = best->val;
    rep.attained = !best->at_edge;
    if (best->at_edge) {
        // analytic limits of the unbounded branch directions
        if (rep.witness_branch == BranchTag::VZero) rep.analytic_limit = 4.0;
        if (rep.witness_branch == BranchTag::UZero) rep.analytic_limit = 2.0;
    }

    // witness at the canonical base point x = 1 (all branch values are
    // invariant under the dilation, so any abscissa represents the class)
    const double uw = (rep.witness_branch == BranchTag::UZero) ? 0.0 : best->rho;
    const double vw = (rep.witness_branch == BranchTag::VZero) ? 0.0 : best->v;
    rep.witness.q = {minus ? -1.0 : 1.0, 0.0};
    rep.witness.lam = {minus ? -uw : uw, vw};
    rep.witness.t = 1.0;
    if (rep.witness_branch == BranchTag::General) rep.witness.a = vw / best->rho;

    rep.samples = static_cast<long>(cfg.x_grid.size()) *
                  static_cast<long>(2 * cfg.u_grid.size() + cfg.v_grid.size() +
                                    2 * cfg.u_grid.size() * cfg.v_grid.size());

    // Direct estimator 2 + sup_t log(ratio)/log(t) on a strided subsample
    // plus the witness itself. It never exceeds the pointwise supremum and
    // matches it at the argmax, which is what the cross-check pins down.
    {
        const Point q1{1.0, 0.0};
        double est = -std::numeric_limits<double>::infinity();
        auto estimate = [&](const Covector& lam) {
            if (!in_injectivity_domain(q1, lam, plane ? SpaceKind::FullPlane
                                                      : SpaceKind::HalfPlanePlus))
                return;
            const double J1 = exp_jacobian(q1, lam);
            for (const double t : cfg.t_grid) {
                const double ratio = exp_jacobian(q1, {t * lam.u, t * lam.v}) / J1;
                if (!(ratio > 0.0)) continue;
                est = std::max(est, 2.0 + std::log(ratio) / std::log(t));
            }
        };
        estimate({best == &uz ? 0.0 : best->rho, best == &vz ? 0.0 : best->v});
        for (std::size_t i = 0; i < cfg.u_grid.size(); i += 16)
            for (const double sign : {1.0, -1.0}) {
                const double rho = sign * cfg.u_grid[i];
                if (vzero_ok(rho)) estimate({rho, 0.0});
                for (std::size_t j = 0; j < cfg.v_grid.size(); j += 16) {
                    const double v = cfg.v_grid[j];
                    if (plane || detail::plus_ok_general(rho, v)) estimate({rho, v});
                }
            }
        rep.estimator_n_min = est;
    }
    return rep;
}

inline VerifyResult verify_mcp(SpaceKind space, double N, const ScanConfig& cfg) {
    if (!(N > 2.0)) throw Error(ErrorCode::InvalidArgument, "need N > 2");
    const ScanReport rep = scan_min_N(space, cfg);
    if (rep.n_min <= N + cfg.tol) return {true, std::nullopt};
    Witness w{rep.witness.q, rep.witness.lam, 1.0, rep.n_min};
    return {false, w};
}

inline CoeffTriple coeff_triple(double v) {
    if (!(v > 0.0 && v < std::numbers::pi))
        throw Error(ErrorCode::DomainError, "coefficients defined for v in (0, pi)");
    const double sv = std::sin(v), cv = std::cos(v);
    CoeffTriple c;
    c.c2 = 3.0 * sv - v * cv;
    c.c1 = 2.0 * sv - v * cv;
    if (std::abs(v) < detail::kSeriesThreshold) {
        const double v2 = v * v;
        c.c0 = v2 * v2 * v * (1.0 / 15.0 + v2 * (-1.0 / 210.0 + v2 / 7560.0));
    } else {
        c.c0 = 3.0 * sv - 3.0 * v * cv - v * v * sv;
    }
    return c;
}

// (N-1) f_a(v) - v f_a'(v); for N = 4 this equals c2 a^2 + v c1 a + c0
// identically (the reduction behind the quadratic-form inequality).
inline double quadratic_form_check(double a, double v, double N) {
    if (!(v > 0.0 && v < std::numbers::pi))
        throw Error(ErrorCode::DomainError, "need v in (0, pi)");
    if (a * a * std::cos(v) + a * std::sin(v) < -1e-12 * (1.0 + a * a))
        throw Error(ErrorCode::DomainError, "(a,v) outside the admissible domain");
    return (N - 1.0) * detail::f_a(a, v) - v * detail::f_a_prime(a, v);
}

// --- set-level Monte Carlo contraction check ------------------------------

struct SetSpec {
    enum class Shape { Disk, Rectangle };
    Shape shape = Shape::Disk;
    Point center;
    double radius = 1.0;
    double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;

    static SetSpec disk(const Point& c, double r) {
        SetSpec s;
        s.shape = Shape::Disk;
        s.center = c;
        s.radius = r;
        return s;
    }
    static SetSpec rect(double x0, double y0, double x1, double y1) {
        SetSpec s;
        s.shape = Shape::Rectangle;
        s.x0 = x0; s.y0 = y0; s.x1 = x1; s.y1 = y1;
        return s;
    }
    double area() const {
        if (shape == Shape::Disk) return std::numbers::pi * radius * radius;
        return (x1 - x0) * (y1 - y0);
    }
    Point sample(double r1, double r2) const {
        if (shape == Shape::Disk) {
            const double r = radius * std::sqrt(r1);
            const double th = 2.0 * std::numbers::pi * r2;
            return {center.x + r * std::cos(th), center.y + r * std::sin(th)};
        }
        return {x0 + r1 * (x1 - x0), y0 + r2 * (y1 - y0)};
    }
    bool inside_space(SpaceKind space) const {
        if (space == SpaceKind::FullPlane) return true;
        const double lo = (shape == Shape::Disk) ? center.x - radius : std::min(x0, x1);
        const double hi = (shape == Shape::Disk) ? center.x + radius : std::max(x0, x1);
        return space == SpaceKind::HalfPlanePlus ? lo >= 0.0 : hi <= 0.0;
    }
};

struct ContractionCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double lhs_stderr = 0.0;
    long used = 0;
    long discarded = 0;
};

// Monte Carlo estimate of m(phi_t(A)) against t^N m(A), for several t at
// once (the covector inversion per sample is shared across the t values).
inline std::vector<ContractionCheck> set_contraction_profile(
    const Point& q, const SetSpec& A, const std::vector<double>& ts, double N, SpaceKind space,
    long n_samples, std::uint64_t seed = 0, int jobs = 0) {
    if (!point_in_space(q, space))
        throw Error(ErrorCode::BasePointOutsideSpace, "base point outside the space");
    if (!A.inside_space(space))
        throw Error(ErrorCode::InvalidArgument, "set A must lie inside the space");
    if (!(A.area() > 0.0)) throw Error(ErrorCode::InvalidArgument, "set A must have positive area");
    for (const double t : ts)
        if (!(t >= 0.0 && t <= 1.0))
            throw Error(ErrorCode::InvalidArgument, "contraction parameter t must be in [0,1]");
    if (n_samples <= 0) throw Error(ErrorCode::InvalidArgument, "need n_samples > 0");

    constexpr long kChunk = 8192;
    const long n_chunks = (n_samples + kChunk - 1) / kChunk;
    const std::size_t nt = ts.size();
    struct Partial {
        std::vector<double> sum, sumsq;
        long used = 0, discarded = 0;
    };
    std::vector<Partial> partials(static_cast<std::size_t>(n_chunks));

    detail::parallel_chunks(n_chunks, jobs, [&](long c) {
        Partial& part = partials[static_cast<std::size_t>(c)];
        part.sum.assign(nt, 0.0);
        part.sumsq.assign(nt, 0.0);
        std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 0x2545F4914F6CDD1DULL * (c + 1));
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const long lo = c * kChunk, hi = std::min(n_samples, lo + kChunk);
        Covector hint{0.0, 0.0};
        bool have_hint = false;
        for (long s = lo; s < hi; ++s) {
            const Point p = A.sample(unif(rng), unif(rng));
            const detail::NewtonOutcome n =
                detail::invert_multistart(q, p, space, have_hint ? &hint : nullptr);
            if (!n.converged) {
                ++part.discarded;  // cut-locus grazing sample, measure zero
                continue;
            }
            hint = n.lam;
            have_hint = true;
            const double J1 = exp_jacobian(q, n.lam);
            for (std::size_t k = 0; k < nt; ++k) {
                const double t = ts[k];
                const double w =
                    (t == 0.0) ? 0.0 : t * t * exp_jacobian(q, {t * n.lam.u, t * n.lam.v}) / J1;
                part.sum[k] += w;
                part.sumsq[k] += w * w;
            }
            ++part.used;
        }
    });

    std::vector<ContractionCheck> out(nt);
    std::vector<double> sum(nt, 0.0), sumsq(nt, 0.0);
    long used = 0, discarded = 0;
    for (const Partial& part : partials) {
        if (part.sum.empty()) continue;
        for (std::size_t k = 0; k < nt; ++k) {
            sum[k] += part.sum[k];
            sumsq[k] += part.sumsq[k];
        }
        used += part.used;
        discarded += part.discarded;
    }
    if (used == 0) throw Error(ErrorCode::Unreachable, "all Monte Carlo samples failed to invert");
    const double area = A.area();
    for (std::size_t k = 0; k < nt; ++k) {
        const double mean = sum[k] / used;
        const double var = std::max(0.0, sumsq[k] / used - mean * mean);
        out[k].lhs = area * mean;
        out[k].rhs = std::pow(ts[k], N) * area;
        out[k].lhs_stderr = area * std::sqrt(var / used);
        out[k].used = used;
        out[k].discarded = discarded;
    }
    return out;
}

inline ContractionCheck set_contraction_check(const Point& q, const SetSpec& A, double t, double N,
                                              SpaceKind space, long n_samples,
                                              std::uint64_t seed = 0, int jobs = 0) {
    return set_contraction_profile(q, A, {t}, N, space, n_samples, seed, jobs).front();
}

// Product with R^k multiplies the Jacobian ratio by t^k, shifting the
// admissible dimension by k.
inline double product_min_N(const ScanReport& report, int k) {
    if (k < 0) throw Error(ErrorCode::InvalidArgument, "need k >= 0");
    return report.n_min + k;
}

}  // namespace grushin
