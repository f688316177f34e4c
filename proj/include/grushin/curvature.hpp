#pragma once

#include <array>
#include <cmath>

#include "grushin/core.hpp"
#include "grushin/errors.hpp"

// Weighted Riemannian data of the Grushin half-plane away from the singular
// axis: the Lebesgue measure equals e^{-V} vol_g with V = -log|x|, and the
// Bakry-Emery tensor Ric_{N,V} = Ric_g + Hess(V) - dV (x) dV/(N-n) has the
// closed form -(1/x^2) g - (1/x^2) dx (x) dx/(N-2). All tensors are stored
// in the coordinate co-frame (dx, dy); frame components against the
// orthonormal frame (X1, X2) = (d/dx, x d/dy) are derived on demand.

namespace grushin {

namespace detail {
inline constexpr double kSingularGuard = 1e-8;

inline void require_off_axis(const Point& p) {
    if (std::abs(p.x) < kSingularGuard)
        throw Error(ErrorCode::SingularLocus, "point too close to the singular axis x = 0");
}
}  // namespace detail

// Symmetric bilinear form at a point, coordinate co-frame components.
struct TensorEval {
    Point at;
    double xx = 0.0, xy = 0.0, yy = 0.0;

    // Components against the orthonormal frame (X1, X2) = (d/dx, x d/dy).
    double frame11() const { return xx; }
    double frame12() const { return at.x * xy; }
    double frame22() const { return at.x * at.x * yy; }

    // Eigenvalues of the frame-component matrix (i.e. of the endomorphism
    // g^{-1} T), ascending.
    std::array<double, 2> frame_eigenvalues() const {
        const double a = frame11(), b = frame12(), c = frame22();
        const double m = 0.5 * (a + c);
        const double r = std::hypot(0.5 * (a - c), b);
        return {m - r, m + r};
    }
};

struct WeightedData {
    double V;    // weight value -log|x|
    int n = 2;   // topological dimension
    double N;    // dimensional parameter, N > n
};

inline WeightedData weighted_data(const Point& p, double N) {
    detail::require_off_axis(p);
    if (!(N > 2.0)) throw Error(ErrorCode::BadDimension, "need N > 2");
    return {-std::log(std::abs(p.x)), 2, N};
}

inline TensorEval metric_at(const Point& p) {
    detail::require_off_axis(p);
    return {p, 1.0, 0.0, 1.0 / (p.x * p.x)};
}

// Levi-Civita frame derivatives; each pair is the expansion of nabla_{Xi} Xj
// on (X1, X2).
struct FrameConnection {
    std::array<double, 2> d11, d12, d21, d22;
};

inline FrameConnection connection_coeffs(const Point& p) {
    detail::require_off_axis(p);
    const double ix = 1.0 / p.x;
    return {{0.0, 0.0}, {0.0, 0.0}, {0.0, -ix}, {ix, 0.0}};
}

// Ric_g = -(2/x^2) g.
inline TensorEval ricci(const Point& p) {
    detail::require_off_axis(p);
    const double x2 = p.x * p.x;
    return {p, -2.0 / x2, 0.0, -2.0 / (x2 * x2)};
}

// Hess(V) = (1/x^2) g for V = -log|x|.
inline TensorEval hessian_weight(const Point& p) {
    detail::require_off_axis(p);
    const double x2 = p.x * p.x;
    return {p, 1.0 / x2, 0.0, 1.0 / (x2 * x2)};
}

// dV (x) dV = (1/x^2) dx (x) dx.
inline TensorEval weight_gradient_square(const Point& p) {
    detail::require_off_axis(p);
    return {p, 1.0 / (p.x * p.x), 0.0, 0.0};
}

inline TensorEval bakry_emery(const Point& p, double N) {
    detail::require_off_axis(p);
    if (!(N > 2.0)) throw Error(ErrorCode::BadDimension, "need N > 2");
    const double x2 = p.x * p.x;
    return {p, -(1.0 + 1.0 / (N - 2.0)) / x2, 0.0, -1.0 / (x2 * x2)};
}

// Assembles Ric_{N,V} from the three intermediate tensors; must agree with
// the closed form above (tested to 1e-12).
inline TensorEval bakry_emery_assembled(const Point& p, double N) {
    if (!(N > 2.0)) throw Error(ErrorCode::BadDimension, "need N > 2");
    const TensorEval r = ricci(p), h = hessian_weight(p), d = weight_gradient_square(p);
    const double s = 1.0 / (N - 2.0);
    return {p, r.xx + h.xx - s * d.xx, r.xy + h.xy - s * d.xy, r.yy + h.yy - s * d.yy};
}

// Finite-difference Gauss curvature of the orthogonal metric dx^2 + G(x)dy^2
// via K = -(1/(2 sqrt G)) d/dx (G'/sqrt G), with G read off metric_at and
// nested central differences. Independent of the closed-form Ricci tensor.
inline double fd_gauss_curvature(const Point& p, double h) {
    if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "need h > 0");
    if (std::abs(p.x) <= 2.0 * h)
        throw Error(ErrorCode::SingularLocus, "stencil reaches the singular axis");
    auto G = [&](double x) { return metric_at({x, p.y}).yy; };
    auto W = [&](double x) {
        const double Gp = (G(x + h) - G(x - h)) / (2.0 * h);
        return Gp / std::sqrt(G(x));
    };
    return -(W(p.x + h) - W(p.x - h)) / (2.0 * h) / (2.0 * std::sqrt(G(p.x)));
}

// True iff Ric_{N,V} <= -(1/x^2) g, checked on the eigenvalues of the
// difference in the orthonormal frame (closed form: {-1/(x^2(N-2)), 0}).
inline bool negativity_check(const Point& p, double N) {
    const TensorEval be = bakry_emery(p, N);
    const TensorEval g = metric_at(p);
    const double ix2 = 1.0 / (p.x * p.x);
    TensorEval diff{p, be.xx + ix2 * g.xx, be.xy + ix2 * g.xy, be.yy + ix2 * g.yy};
    const auto ev = diff.frame_eigenvalues();
    return ev[0] <= 1e-12 && ev[1] <= 1e-12;
}

}  // namespace grushin
