// Symmetric positive definite matrices with their eigendecomposition cached
// at construction. All divergences and gradients downstream work through the
// cached spectrum, so an SpdMatrix is immutable once built and cheap to share.
#pragma once

#include <cmath>
#include <sstream>
#include <utility>

#include "vncd/eig.hpp"
#include "vncd/matrix.hpp"

namespace vncd {

// Absolute eigenvalue floor accepted after jitter.
inline constexpr double kEigenvalueFloor = 1e-12;

class SpdMatrix {
  public:
    // Symmetrizes the input, decomposes it and rejects any spectrum below the
    // floor. The offending eigenvalue is named in the error.
    explicit SpdMatrix(const Matrix& entries, double eigenvalue_floor = kEigenvalueFloor)
        : entries_(symmetrized(entries)), eig_(sym_eig(entries_)) {
        for (double lambda : eig_.values) {
            if (!(lambda >= eigenvalue_floor)) {
                std::ostringstream msg;
                msg << "SpdMatrix: eigenvalue " << lambda << " below floor "
                    << eigenvalue_floor;
                throw Error(msg.str());
            }
        }
    }

    static SpdMatrix identity(std::size_t n) { return SpdMatrix(Matrix::identity(n)); }

    static SpdMatrix from_diagonal(const Vector& d) {
        return SpdMatrix(Matrix::diagonal(d));
    }

    std::size_t dim() const { return entries_.rows(); }
    const Matrix& entries() const { return entries_; }
    const Vector& eigenvalues() const { return eig_.values; }
    const Matrix& eigenvectors() const { return eig_.vectors; }
    const EigResult& eig() const { return eig_; }

    double operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }

    double trace() const { return entries_.trace(); }

    // Tr(log) via the spectrum; equals log det.
    double log_trace() const {
        double s = 0.0;
        for (double lambda : eig_.values) s += std::log(lambda);
        return s;
    }

    Matrix log() const {
        Vector logged(eig_.values.size());
        for (std::size_t i = 0; i < logged.size(); ++i) logged[i] = std::log(eig_.values[i]);
        return assemble_spectral(eig_, logged);
    }

    Matrix inverse() const {
        Vector inv(eig_.values.size());
        for (std::size_t i = 0; i < inv.size(); ++i) inv[i] = 1.0 / eig_.values[i];
        return assemble_spectral(eig_, inv);
    }

    // A = U diag(sqrt(lambda)); maps standard normals to N(0, entries).
    Matrix sampling_transform() const {
        const std::size_t n = dim();
        Matrix t(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                t(i, j) = eig_.vectors(i, j) * std::sqrt(eig_.values[j]);
        return t;
    }

  private:
    Matrix entries_;
    EigResult eig_;
};

inline Matrix matrix_log(const SpdMatrix& x) { return x.log(); }

}  // namespace vncd
