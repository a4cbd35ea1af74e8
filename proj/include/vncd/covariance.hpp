// Sample covariance estimation (mean-centered, 1/n) with trace-scaled jitter,
// the joint feature/response covariance carrier, and the conditional
// divergences built on top of it.
#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "vncd/divergence.hpp"
#include "vncd/rng.hpp"
#include "vncd/spd.hpp"

namespace vncd {

// Jitter added to every estimated covariance, scaled by the mean diagonal
// mass; falls back to unit scale for an all-constant batch whose raw
// covariance has zero trace.
inline double covariance_jitter(double raw_trace, std::size_t dim) {
    double scale = raw_trace / static_cast<double>(dim);
    if (!(scale > 1e-12)) scale = 1.0;
    return 1e-5 * scale;
}

struct DatasetBatch {
    Matrix features;                  // n x d
    std::optional<Matrix> response;   // n x r, absent for unlabeled data

    DatasetBatch() = default;
    DatasetBatch(Matrix f, std::optional<Matrix> r)
        : features(std::move(f)), response(std::move(r)) {
        validate();
    }

    std::size_t n() const { return features.rows(); }
    std::size_t feature_dim() const { return features.cols(); }
    std::size_t response_dim() const { return response ? response->cols() : 0; }
    bool labeled() const { return response.has_value(); }

    void validate() const {
        if (features.rows() < 2) throw Error("DatasetBatch: need at least 2 samples");
        if (!features.all_finite()) throw Error("DatasetBatch: non-finite feature entries");
        if (response) {
            if (response->rows() != features.rows())
                throw Error("DatasetBatch: response row count mismatch");
            if (!response->all_finite()) throw Error("DatasetBatch: non-finite response entries");
        }
    }

    DatasetBatch subset(const std::vector<std::size_t>& idx) const {
        Matrix f(idx.size(), features.cols());
        for (std::size_t i = 0; i < idx.size(); ++i)
            for (std::size_t j = 0; j < features.cols(); ++j) f(i, j) = features(idx[i], j);
        std::optional<Matrix> r;
        if (response) {
            Matrix rr(idx.size(), response->cols());
            for (std::size_t i = 0; i < idx.size(); ++i)
                for (std::size_t j = 0; j < response->cols(); ++j)
                    rr(i, j) = (*response)(idx[i], j);
            r = std::move(rr);
        }
        return DatasetBatch(std::move(f), std::move(r));
    }
};

namespace detail {

// Mean-centered 1/n covariance of the rows, without jitter.
inline Matrix raw_covariance(const Matrix& samples) {
    const std::size_t n = samples.rows();
    const std::size_t d = samples.cols();
    Vector mean(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) mean[j] += samples(i, j);
    for (double& m : mean) m /= static_cast<double>(n);

    Matrix cov(d, d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < d; ++a) {
            const double ca = samples(i, a) - mean[a];
            if (ca == 0.0) continue;
            for (std::size_t b = a; b < d; ++b)
                cov(a, b) += ca * (samples(i, b) - mean[b]);
        }
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a; b < d; ++b) {
            cov(a, b) *= inv_n;
            cov(b, a) = cov(a, b);
        }
    return cov;
}

inline Matrix add_jitter(Matrix cov) {
    const double eps = covariance_jitter(cov.trace(), cov.rows());
    for (std::size_t i = 0; i < cov.rows(); ++i) cov(i, i) += eps;
    return cov;
}

}  // namespace detail

// Covariance of the rows of `samples`, jittered so the result is strictly
// positive definite even for degenerate batches.
inline SpdMatrix estimate_covariance(const Matrix& samples) {
    if (samples.rows() < 2) throw Error("estimate_covariance: need at least 2 samples");
    if (!samples.all_finite()) throw Error("estimate_covariance: non-finite entries");
    return SpdMatrix(detail::add_jitter(detail::raw_covariance(samples)));
}

// Covariance of stacked (features, response). The feature marginal is
// estimated from the same raw block but jittered with its own trace scale,
// so two joints built over identical feature samples carry bitwise-identical
// marginals and the conditional divergence reduces exactly.
struct JointCovariance {
    std::size_t feature_dim = 0;
    std::size_t response_dim = 0;
    SpdMatrix joint;             // (d + r) x (d + r); features first
    SpdMatrix feature_marginal;  // d x d

    JointCovariance(std::size_t d, std::size_t r, SpdMatrix j, SpdMatrix m)
        : feature_dim(d), response_dim(r), joint(std::move(j)), feature_marginal(std::move(m)) {
        if (joint.dim() != feature_dim + response_dim)
            throw Error("JointCovariance: joint dimension mismatch");
        if (feature_marginal.dim() != feature_dim)
            throw Error("JointCovariance: marginal dimension mismatch");
    }
};

inline Matrix stack_columns(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw Error("stack_columns: row count mismatch");
    Matrix s(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) s(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) s(i, a.cols() + j) = b(i, j);
    }
    return s;
}

inline JointCovariance joint_covariance_of(const Matrix& features, const Matrix& response) {
    const Matrix stacked = stack_columns(features, response);
    if (stacked.rows() < 2) throw Error("joint_covariance_of: need at least 2 samples");
    if (!stacked.all_finite()) throw Error("joint_covariance_of: non-finite entries");
    const Matrix raw = detail::raw_covariance(stacked);
    SpdMatrix joint(detail::add_jitter(raw));
    SpdMatrix marginal(detail::add_jitter(raw.block(0, 0, features.cols(), features.cols())));
    return JointCovariance(features.cols(), response.cols(), std::move(joint), std::move(marginal));
}

inline JointCovariance estimate_joint_covariance(const DatasetBatch& batch) {
    if (!batch.labeled()) throw Error("estimate_joint_covariance: batch has no response");
    return joint_covariance_of(batch.features, *batch.response);
}

namespace detail {

inline void check_joint_dims(const JointCovariance& p1, const JointCovariance& p2) {
    if (p1.feature_dim != p2.feature_dim || p1.response_dim != p2.response_dim)
        throw Error("conditional divergence: dimension mismatch");
}

}  // namespace detail

// D(P1(y|x) || P2(y|x)) = D_vN(joint1 || joint2) - D_vN(marg1 || marg2).
// May be negative on sample estimates.
inline double conditional_divergence_asym(const JointCovariance& p1, const JointCovariance& p2) {
    detail::check_joint_dims(p1, p2);
    return vn_divergence(p1.joint, p2.joint) -
           vn_divergence(p1.feature_marginal, p2.feature_marginal);
}

// Symmetric form: the average of both directions. Equals the Jeffery
// divergence of the joints whenever the feature marginals coincide.
inline double conditional_divergence(const JointCovariance& p1, const JointCovariance& p2) {
    return 0.5 * (conditional_divergence_asym(p1, p2) + conditional_divergence_asym(p2, p1));
}

struct ConvergencePoint {
    std::size_t sample_count;
    double mean_divergence;
};

// Mean D_vN(sample estimate || true_cov) per sample size, averaged over
// seeded trials. Used to check the qualitative convergence trend.
inline std::vector<ConvergencePoint> empirical_convergence_curve(
    const SpdMatrix& true_cov, const std::vector<std::size_t>& sample_sizes,
    std::size_t trials, std::uint64_t seed) {
    for (std::size_t n : sample_sizes)
        if (n < 2) throw Error("empirical_convergence_curve: sample size below 2");

    const Matrix transform = true_cov.sampling_transform();
    const std::size_t d = true_cov.dim();
    std::vector<ConvergencePoint> curve;
    curve.reserve(sample_sizes.size());

    Rng root(seed);
    for (std::size_t size_idx = 0; size_idx < sample_sizes.size(); ++size_idx) {
        const std::size_t n = sample_sizes[size_idx];
        double total = 0.0;
        for (std::size_t t = 0; t < trials; ++t) {
            Rng rng = root.derive("convergence", size_idx * 1000003ULL + t);
            Matrix samples(n, d);
            Vector z(d);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < d; ++j) z[j] = rng.normal();
                const Vector xi = transform.times(z);
                for (std::size_t j = 0; j < d; ++j) samples(i, j) = xi[j];
            }
            total += vn_divergence(estimate_covariance(samples), true_cov);
        }
        curve.push_back({n, total / static_cast<double>(trials)});
    }
    return curve;
}

}  // namespace vncd
