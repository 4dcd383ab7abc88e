#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Core>
#include <Eigen/QR>

#include "shapesim/forecast/gp.hpp"

namespace shapesim::forecast {

inline constexpr int kMaxArOrder = 3;
inline constexpr int kMinAriObservations = 5;

/// Autoregressive model on the d-times differenced series:
///   z_t = intercept + sum_i coefficients[i-1] * z_{t-i} + e_t,  z = (1 - L)^d y
template <typename Scalar>
struct ArModel {
    int p = 0;
    int d = 0;
    VectorX<Scalar> coefficients;
    Scalar intercept{0};
    Scalar residual_variance{0};
    Scalar aic{0};
    Eigen::Index window_length = 0;
};

/// OLS fit for every (p, d) in {0..3} x {0, 1}; returns the minimum-AIC model.
/// All candidates are scored on the same target rows so their AIC values are comparable.
/// Rank-deficient candidates (e.g. AR terms on a constant series) are skipped.
template <typename Derived>
ArModel<typename Derived::Scalar> ari_fit(const Eigen::MatrixBase<Derived>& series) {
    using Scalar = typename Derived::Scalar;
    const Eigen::Index n = series.size();
    if (n < kMinAriObservations) throw std::invalid_argument("ari_fit: series too short (need >= 5 observations)");
    const VectorX<Scalar> y = series.derived().reshaped();

    // at least p+1 parameters and two residual degrees of freedom
    auto feasible = [n](int p, int d) { return n - (p + d) >= p + 3; };
    Eigen::Index start = 0;
    for (int p = 0; p <= kMaxArOrder; ++p)
        for (int d = 0; d <= 1; ++d)
            if (feasible(p, d)) start = std::max<Eigen::Index>(start, p + d);
    const Eigen::Index rows = n - start;
    const Scalar floor = Scalar(1e-12);

    auto z = [&y](int d, Eigen::Index t) { return d == 0 ? y(t) : y(t) - y(t - 1); };

    ArModel<Scalar> best;
    bool found = false;
    for (int p = 0; p <= kMaxArOrder; ++p) {
        for (int d = 0; d <= 1; ++d) {
            if (!feasible(p, d)) continue;
            MatrixX<Scalar> A(rows, p + 1);
            VectorX<Scalar> b(rows);
            for (Eigen::Index r = 0; r < rows; ++r) {
                const Eigen::Index t = start + r;
                b(r) = z(d, t);
                A(r, 0) = 1;
                for (int i = 1; i <= p; ++i) A(r, i) = z(d, t - i);
            }
            Eigen::ColPivHouseholderQR<MatrixX<Scalar>> qr(A);
            if (qr.rank() < p + 1) continue;
            const VectorX<Scalar> beta = qr.solve(b);
            const Scalar sse = (b - A * beta).squaredNorm();
            const Scalar aic = static_cast<Scalar>(rows) * std::log(std::max(sse / static_cast<Scalar>(rows), floor)) +
                               2 * static_cast<Scalar>(p + d + 1);
            if (!std::isfinite(aic)) continue;
            if (!found || aic < best.aic) {
                best.p = p;
                best.d = d;
                best.intercept = beta(0);
                best.coefficients = beta.tail(p);
                best.residual_variance = std::max(sse / static_cast<Scalar>(rows - p - 1), floor);
                best.aic = aic;
                best.window_length = n;
                found = true;
            }
        }
    }
    if (!found) throw std::runtime_error("ari_fit: no candidate model could be fitted");
    return best;
}

/// One-step-ahead forecast; `history` holds the trailing observations, oldest first.
/// The variance is the residual variance (k = 1 forecast error).
template <typename Scalar, typename Derived>
Predictive<Scalar> ari_forecast(const ArModel<Scalar>& model, const Eigen::MatrixBase<Derived>& history) {
    const Eigen::Index m = history.size();
    if (m < std::max<Eigen::Index>(1, model.p + model.d))
        throw std::invalid_argument("ari_forecast: insufficient history for the model order");
    auto y = [&history, m](Eigen::Index back) { return history(m - 1 - back); };  // back = 0 is newest
    auto z = [&](Eigen::Index back) { return model.d == 0 ? y(back) : y(back) - y(back + 1); };

    Scalar next = model.intercept;
    for (int i = 1; i <= model.p; ++i) next += model.coefficients(i - 1) * z(i - 1);
    if (model.d == 1) next += y(0);
    return {next, model.residual_variance};
}

}  // namespace shapesim::forecast
