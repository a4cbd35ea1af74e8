// von Neumann divergence, its symmetrized (Jeffery) form, the square-root
// loss, and exact gradients. Cost per call is one eigendecomposition per
// distinct argument, O(d^3), plus O(d^2) trace work.
#pragma once

#include <cmath>
#include <sstream>

#include "vncd/spd.hpp"

namespace vncd {

// Divergences in [-kNegativeClamp, 0) round to zero; anything more negative
// is reported as a numerical failure.
inline constexpr double kNegativeClamp = 1e-10;

namespace detail {

inline void check_same_dim(const SpdMatrix& x, const SpdMatrix& y, const char* who) {
    if (x.dim() != y.dim()) {
        std::ostringstream msg;
        msg << who << ": dimension mismatch (" << x.dim() << " vs " << y.dim() << ")";
        throw Error(msg.str());
    }
}

inline double clamp_divergence(double value, const char* who) {
    if (value >= 0.0) return value;
    if (value >= -kNegativeClamp) return 0.0;
    std::ostringstream msg;
    msg << who << ": numerical failure, divergence " << value;
    throw Error(msg.str());
}

}  // namespace detail

// D_vN(x || y) = Tr(x log x - x log y - x + y).
// Both log-trace terms go through the same product path so that bitwise-equal
// arguments give exactly zero.
inline double vn_divergence(const SpdMatrix& x, const SpdMatrix& y) {
    detail::check_same_dim(x, y, "vn_divergence");
    const double t1 = trace_of_product(x.entries(), x.log());
    const double t2 = trace_of_product(x.entries(), y.log());
    return detail::clamp_divergence(t1 - t2 - x.trace() + y.trace(), "vn_divergence");
}

// J_vN(x : y) = 1/2 Tr((x - y)(log x - log y)). Computed from this single
// symmetric formula, so swapping the arguments is a bitwise no-op.
inline double jeffery_divergence(const SpdMatrix& x, const SpdMatrix& y) {
    detail::check_same_dim(x, y, "jeffery_divergence");
    const Matrix diff = x.entries() - y.entries();
    const Matrix log_diff = x.log() - y.log();
    return detail::clamp_divergence(0.5 * trace_of_product(diff, log_diff),
                                    "jeffery_divergence");
}

// sqrt(J_vN), the training loss; obeys the triangle inequality on SPD triples.
inline double sqrt_jeffery_loss(const SpdMatrix& x, const SpdMatrix& y) {
    return std::sqrt(jeffery_divergence(x, y));
}

enum class GradientMode {
    paper_closed_form,  // 1/2 (log X - log Y - Y X^-1 + I); exact only for commuting pairs
    daleckii_krein,     // exact Frechet derivative via divided differences
};

struct GradientPair {
    Matrix wrt_x;
    Matrix wrt_y;
};

namespace detail {

// Frechet derivative of the matrix log at x, applied to symmetric s:
// U (K o (U^T s U)) U^T with K the divided-difference kernel of log.
inline Matrix log_frechet(const SpdMatrix& x, const Matrix& s) {
    const std::size_t n = x.dim();
    const Matrix& u = x.eigenvectors();
    const Vector& lambda = x.eigenvalues();

    const Matrix inner = u.transposed() * s * u;
    Matrix scaled(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double d = lambda[i] - lambda[j];
            const double k = (d == 0.0) ? 1.0 / lambda[i] : std::log1p(d / lambda[j]) / d;
            scaled(i, j) = k * inner(i, j);
        }
    }
    return symmetrized(u * scaled * u.transposed());
}

}  // namespace detail

// Gradient of jeffery_divergence with respect to each argument.
inline GradientPair divergence_gradient(const SpdMatrix& x, const SpdMatrix& y,
                                        GradientMode mode) {
    detail::check_same_dim(x, y, "divergence_gradient");
    const Matrix log_x = x.log();
    const Matrix log_y = y.log();

    if (mode == GradientMode::paper_closed_form) {
        const Matrix eye = Matrix::identity(x.dim());
        GradientPair g;
        g.wrt_x = symmetrized(0.5 * (log_x - log_y - y.entries() * x.inverse() + eye));
        g.wrt_y = symmetrized(0.5 * (log_y - log_x - x.entries() * y.inverse() + eye));
        return g;
    }

    const Matrix diff = x.entries() - y.entries();
    GradientPair g;
    g.wrt_x = 0.5 * (log_x - log_y) + 0.5 * detail::log_frechet(x, diff);
    g.wrt_y = 0.5 * (log_y - log_x) - 0.5 * detail::log_frechet(y, diff);
    return g;
}

}  // namespace vncd
