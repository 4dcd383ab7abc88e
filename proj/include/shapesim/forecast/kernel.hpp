#pragma once

#include <cmath>
#include <stdexcept>
#include <string_view>

#include <Eigen/Core>

namespace shapesim::forecast {

enum class KernelKind { exponential, rbf };

std::string_view to_string(KernelKind kind);
KernelKind kernel_from_string(std::string_view name);

/// Stationary kernel on history patterns.
///   exponential: sf2 * exp(-|a-b| / ell)
///   rbf:         sf2 * exp(-|a-b|^2 / (2 ell^2))
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar kernel_eval(KernelKind kind, const Eigen::MatrixBase<DerivedA>& a,
                                      const Eigen::MatrixBase<DerivedB>& b, typename DerivedA::Scalar signal_variance,
                                      typename DerivedA::Scalar lengthscale) {
    using std::exp;
    using std::sqrt;
    if (a.size() != b.size()) throw std::invalid_argument("kernel_eval: pattern length mismatch");
    const auto sq = (a.derived().reshaped() - b.derived().reshaped()).squaredNorm();
    if (kind == KernelKind::exponential) return signal_variance * exp(-sqrt(sq) / lengthscale);
    return signal_variance * exp(-sq / (2 * lengthscale * lengthscale));
}

/// Gram matrix over the rows of X.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> gram_matrix(
    KernelKind kind, const Eigen::MatrixBase<Derived>& X, typename Derived::Scalar signal_variance,
    typename Derived::Scalar lengthscale) {
    const Eigen::Index n = X.rows();
    Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> K(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        K(i, i) = signal_variance;
        for (Eigen::Index j = 0; j < i; ++j) {
            K(i, j) = kernel_eval(kind, X.row(i), X.row(j), signal_variance, lengthscale);
            K(j, i) = K(i, j);
        }
    }
    return K;
}

/// k(X, x): kernel between every row of X and the query pattern x.
template <typename DerivedX, typename DerivedQ>
Eigen::Matrix<typename DerivedX::Scalar, Eigen::Dynamic, 1> cross_kernel(KernelKind kind,
                                                                         const Eigen::MatrixBase<DerivedX>& X,
                                                                         const Eigen::MatrixBase<DerivedQ>& x,
                                                                         typename DerivedX::Scalar signal_variance,
                                                                         typename DerivedX::Scalar lengthscale) {
    if (X.cols() != x.size()) throw std::invalid_argument("cross_kernel: pattern length mismatch");
    Eigen::Matrix<typename DerivedX::Scalar, Eigen::Dynamic, 1> k(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        k(i) = kernel_eval(kind, X.row(i).transpose(), x.derived().reshaped(), signal_variance, lengthscale);
    return k;
}

}  // namespace shapesim::forecast
