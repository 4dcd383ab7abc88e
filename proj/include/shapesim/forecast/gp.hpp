#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "shapesim/forecast/kernel.hpp"

namespace shapesim::forecast {

template <typename Scalar>
struct Predictive {
    Scalar mean{};
    Scalar variance{};
};

using PredictiveDistribution = Predictive<double>;

template <typename Scalar>
struct GpHyperparams {
    Scalar signal_variance{0.25};
    Scalar lengthscale{0.5};
    Scalar noise_variance{1e-2};

    friend bool operator==(const GpHyperparams&, const GpHyperparams&) = default;
};

/// Evidence-maximization grid, on reservation-normalized data.
template <typename Scalar>
struct HyperGrid {
    std::vector<Scalar> signal_variance{0.05, 0.25, 1.0};
    std::vector<Scalar> lengthscale{0.1, 0.5, 2.0, 8.0};
    std::vector<Scalar> noise_variance{1e-4, 1e-2, 1e-1};
};

class SingularSystem : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Cholesky of a symmetric matrix. Retries with diagonal jitter of 1e-8 * trace,
/// growing x10 up to 1e-2 * trace, then gives up.
template <typename Derived>
Eigen::LLT<MatrixX<typename Derived::Scalar>> jittered_cholesky(const Eigen::MatrixBase<Derived>& A) {
    using Scalar = typename Derived::Scalar;
    auto usable = [](const Eigen::LLT<MatrixX<Scalar>>& llt) {
        return llt.info() == Eigen::Success && llt.matrixLLT().diagonal().allFinite() &&
               (llt.matrixLLT().diagonal().array() > Scalar(0)).all();
    };
    Eigen::LLT<MatrixX<Scalar>> llt(A);
    if (usable(llt)) return llt;
    const Scalar trace = A.trace();
    const auto n = A.rows();
    for (Scalar jitter = Scalar(1e-8) * trace; jitter <= Scalar(1e-2) * trace * Scalar(1.0000001); jitter *= 10) {
        llt.compute(A + jitter * MatrixX<Scalar>::Identity(n, n));
        if (usable(llt)) return llt;
    }
    throw SingularSystem("kernel system is numerically singular after jitter escalation");
}

/// Regression on history patterns: each row of `patterns` is [time, y_{t-h}, ..., y_{t-1}]
/// and the matching entry of `targets` is y_t. Zero-mean prior.
template <typename Scalar>
struct GpModel {
    KernelKind kernel = KernelKind::exponential;
    int history = 10;  // h
    int window = 10;   // N, max retained rows
    GpHyperparams<Scalar> hyper{};
    MatrixX<Scalar> patterns;
    VectorX<Scalar> targets;
};

template <typename Scalar, typename DerivedQ>
Predictive<Scalar> gp_posterior(const GpModel<Scalar>& model, const Eigen::MatrixBase<DerivedQ>& query) {
    const auto n = model.patterns.rows();
    if (n < 1) throw std::invalid_argument("gp_posterior: model has no retained patterns");
    if (model.targets.size() != n) throw std::invalid_argument("gp_posterior: targets/patterns size mismatch");
    if (query.size() != model.patterns.cols()) throw std::invalid_argument("gp_posterior: query length mismatch");

    const auto& hp = model.hyper;
    MatrixX<Scalar> K = gram_matrix(model.kernel, model.patterns, hp.signal_variance, hp.lengthscale);
    K.diagonal().array() += hp.noise_variance;
    const auto llt = jittered_cholesky(K);

    const VectorX<Scalar> k = cross_kernel(model.kernel, model.patterns, query, hp.signal_variance, hp.lengthscale);
    const VectorX<Scalar> alpha = llt.solve(model.targets);
    const VectorX<Scalar> v = llt.matrixL().solve(k);
    const Scalar var = hp.signal_variance - v.squaredNorm();
    return {k.dot(alpha), var > Scalar(0) ? var : Scalar(0)};
}

/// log p(y | X) for the given hyperparameters.
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar log_marginal_likelihood(KernelKind kind, const Eigen::MatrixBase<DerivedX>& X,
                                                  const Eigen::MatrixBase<DerivedY>& y,
                                                  const GpHyperparams<typename DerivedX::Scalar>& hp) {
    using Scalar = typename DerivedX::Scalar;
    MatrixX<Scalar> K = gram_matrix(kind, X, hp.signal_variance, hp.lengthscale);
    K.diagonal().array() += hp.noise_variance;
    const auto llt = jittered_cholesky(K);
    const VectorX<Scalar> alpha = llt.solve(y);
    const Scalar log_det = 2 * llt.matrixLLT().diagonal().array().log().sum();
    const auto n = static_cast<Scalar>(X.rows());
    return Scalar(-0.5) * y.dot(alpha) - Scalar(0.5) * log_det -
           Scalar(0.5) * n * std::log(2 * std::numbers::pi_v<Scalar>);
}

/// Grid point maximizing the log marginal likelihood; first in grid order wins ties.
template <typename DerivedX, typename DerivedY>
GpHyperparams<typename DerivedX::Scalar> gp_select_hyperparams(
    const Eigen::MatrixBase<DerivedX>& X, const Eigen::MatrixBase<DerivedY>& y, KernelKind kind,
    const HyperGrid<typename DerivedX::Scalar>& grid = {}) {
    using Scalar = typename DerivedX::Scalar;
    if (X.rows() < 2) throw std::invalid_argument("gp_select_hyperparams: need at least 2 observations");
    if (y.size() != X.rows()) throw std::invalid_argument("gp_select_hyperparams: X/y size mismatch");

    // Pairwise distances do not depend on the hyperparameters.
    const auto n = X.rows();
    MatrixX<Scalar> dist(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        dist(i, i) = 0;
        for (Eigen::Index j = 0; j < i; ++j) {
            const Scalar sq = (X.row(i) - X.row(j)).squaredNorm();
            dist(i, j) = dist(j, i) = kind == KernelKind::exponential ? std::sqrt(sq) : sq;
        }
    }
    const Scalar log_2pi = std::log(2 * std::numbers::pi_v<Scalar>);

    GpHyperparams<Scalar> best{};
    Scalar best_lml = -std::numeric_limits<Scalar>::infinity();
    bool found = false;
    for (Scalar sf2 : grid.signal_variance) {
        for (Scalar ell : grid.lengthscale) {
            const MatrixX<Scalar> base =
                kind == KernelKind::exponential
                    ? MatrixX<Scalar>(sf2 * (-dist.array() / ell).exp())
                    : MatrixX<Scalar>(sf2 * (-dist.array() / (2 * ell * ell)).exp());
            for (Scalar noise : grid.noise_variance) {
                MatrixX<Scalar> K = base;
                K.diagonal().array() += noise;
                Scalar lml;
                try {
                    const auto llt = jittered_cholesky(K);
                    const VectorX<Scalar> alpha = llt.solve(y);
                    lml = Scalar(-0.5) * y.dot(alpha) - llt.matrixLLT().diagonal().array().log().sum() -
                          Scalar(0.5) * static_cast<Scalar>(n) * log_2pi;
                } catch (const SingularSystem&) {
                    continue;
                }
                if (std::isfinite(lml) && (!found || lml > best_lml)) {
                    best = {sf2, ell, noise};
                    best_lml = lml;
                    found = true;
                }
            }
        }
    }
    if (!found) throw SingularSystem("gp_select_hyperparams: every grid point is singular");
    return best;
}

}  // namespace shapesim::forecast
