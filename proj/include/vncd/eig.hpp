// Symmetric eigendecomposition by cyclic Jacobi rotations. Deterministic,
// dependency-free, accurate to ~1e-12 relative off-diagonal mass, which is
// what the matrix-log based divergences downstream rely on.
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "vncd/matrix.hpp"

namespace vncd {

struct EigResult {
    Vector values;   // ascending
    Matrix vectors;  // columns are eigenvectors, same order as values
};

namespace detail {

inline double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

}  // namespace detail

// Requires a symmetric, finite matrix. Throws with the residual norm if the
// sweep cap is hit before convergence.
inline EigResult sym_eig(const Matrix& m) {
    if (m.rows() != m.cols()) throw Error("sym_eig: matrix not square");
    if (!m.all_finite()) throw Error("sym_eig: non-finite entries");
    const std::size_t n = m.rows();

    Matrix a = symmetrized(m);
    Matrix v = Matrix::identity(n);

    const double scale = std::max(a.frobenius_norm(), 1e-300);
    constexpr double kTolerance = 1e-12;
    constexpr int kMaxSweeps = 100;

    int sweep = 0;
    while (detail::off_diagonal_norm(a) > kTolerance * scale) {
        if (sweep++ >= kMaxSweeps) {
            std::ostringstream msg;
            msg << "sym_eig: no convergence after " << kMaxSweeps
                << " sweeps, off-diagonal residual " << detail::off_diagonal_norm(a);
            throw Error(msg.str());
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                // Classic stable rotation (Golub & Van Loan).
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

    EigResult r;
    r.values.resize(n);
    r.vectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        r.values[j] = a(order[j], order[j]);
        for (std::size_t i = 0; i < n; ++i) r.vectors(i, j) = v(i, order[j]);
    }
    return r;
}

// U * diag(f(lambda)) * U^T assembled from a decomposition.
inline Matrix assemble_spectral(const EigResult& eig, const Vector& transformed) {
    const std::size_t n = eig.values.size();
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                s += eig.vectors(i, k) * transformed[k] * eig.vectors(j, k);
            out(i, j) = s;
            out(j, i) = s;
        }
    }
    return out;
}

}  // namespace vncd
