#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "sensoria/error.hpp"

namespace sensoria {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Sample Pearson correlation, clamped into [-1, 1]. A constant input has no
// defined correlation.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar pearson(const Eigen::MatrixBase<DerivedA>& x,
                                  const Eigen::MatrixBase<DerivedB>& y) {
    using Scalar = typename DerivedA::Scalar;
    if (x.size() != y.size()) throw DegenerateInputError("pearson: length mismatch");
    if (x.size() < 2) throw DegenerateInputError("pearson: need at least 2 samples");
    VectorX<Scalar> xc = x.reshaped() - VectorX<Scalar>::Constant(x.size(), x.mean());
    VectorX<Scalar> yc = y.reshaped() - VectorX<Scalar>::Constant(y.size(), y.mean());
    Scalar nx = xc.norm();
    Scalar ny = yc.norm();
    if (nx == Scalar(0) || ny == Scalar(0))
        throw DegenerateInputError("pearson: constant vector");
    Scalar p = xc.dot(yc) / (nx * ny);
    return std::clamp(p, Scalar(-1), Scalar(1));
}

// D = 0.5 * (1 - p); 0 at identity, 1 at opposition
template <typename Scalar>
Scalar pearson_distance(Scalar p) {
    return Scalar(0.5) * (Scalar(1) - p);
}

// Pairwise distances between the rows of `vectors`. The result is exactly
// symmetric with a zero diagonal and entries in [0, 1].
template <typename Derived>
MatrixX<typename Derived::Scalar> pearson_distance_matrix(
    const Eigen::MatrixBase<Derived>& vectors) {
    using Scalar = typename Derived::Scalar;
    const Eigen::Index n = vectors.rows();
    if (vectors.cols() < 2)
        throw DegenerateInputError("distance matrix: vectors need at least 2 dimensions");

    // center and normalize once; row dot products are then correlations
    MatrixX<Scalar> centered = vectors;
    centered.colwise() -= VectorX<Scalar>(vectors.rowwise().mean());
    for (Eigen::Index i = 0; i < n; ++i) {
        Scalar norm = centered.row(i).norm();
        if (norm == Scalar(0))
            throw DegenerateInputError("distance matrix: constant vector at row " +
                                       std::to_string(i));
        centered.row(i) /= norm;
    }

    MatrixX<Scalar> dist(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        dist(i, i) = Scalar(0);
        for (Eigen::Index j = i + 1; j < n; ++j) {
            Scalar p = std::clamp(centered.row(i).dot(centered.row(j)), Scalar(-1), Scalar(1));
            Scalar d = std::clamp(pearson_distance(p), Scalar(0), Scalar(1));
            dist(i, j) = d;
            dist(j, i) = d;
        }
    }
    return dist;
}

template <typename Scalar>
struct Pca {
    MatrixX<Scalar> components;                // n_components x m, unit rows
    VectorX<Scalar> explained_variance;        // descending eigenvalues
    VectorX<Scalar> explained_variance_ratio;  // eigenvalues / total variance
    MatrixX<Scalar> scores;                    // n x n_components
    VectorX<Scalar> mean;                      // column means of the input
};

// PCA on rows-as-observations via SVD of the column-centered data. Columns
// are centered, never variance-scaled. With n observations of m features at
// most min(n - 1, m) components are identifiable; asking for more is an
// error. Sign convention: each component's largest-magnitude entry is
// non-negative.
template <typename Derived>
Pca<typename Derived::Scalar> pca_fit(const Eigen::MatrixBase<Derived>& data,
                                      Eigen::Index n_components) {
    using Scalar = typename Derived::Scalar;
    const Eigen::Index n = data.rows();
    const Eigen::Index m = data.cols();
    if (n_components < 1) throw ValidationError("pca: need at least 1 component");
    const Eigen::Index max_rank = std::min(n - 1, m);
    if (n_components > max_rank)
        throw ValidationError("pca: " + std::to_string(n_components) +
                              " components requested but data of " + std::to_string(n) +
                              " x " + std::to_string(m) + " supports at most " +
                              std::to_string(std::max<Eigen::Index>(max_rank, 0)));

    Pca<Scalar> result;
    result.mean = data.colwise().mean();
    MatrixX<Scalar> centered = data.rowwise() - result.mean.transpose();

    Scalar total_variance = centered.squaredNorm() / Scalar(n - 1);
    if (total_variance == Scalar(0))
        throw DegenerateInputError("pca: all observations identical");

    Eigen::BDCSVD<MatrixX<Scalar>> svd(centered, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();

    result.components = svd.matrixV().leftCols(n_components).transpose();
    result.scores = centered * svd.matrixV().leftCols(n_components);
    result.explained_variance.resize(n_components);
    result.explained_variance_ratio.resize(n_components);
    for (Eigen::Index k = 0; k < n_components; ++k) {
        Scalar lambda = (k < sv.size()) ? sv(k) * sv(k) / Scalar(n - 1) : Scalar(0);
        result.explained_variance(k) = lambda;
        result.explained_variance_ratio(k) = lambda / total_variance;
    }

    for (Eigen::Index k = 0; k < n_components; ++k) {
        Eigen::Index arg = 0;
        result.components.row(k).cwiseAbs().maxCoeff(&arg);
        if (result.components(k, arg) < Scalar(0)) {
            result.components.row(k) = -result.components.row(k);
            result.scores.col(k) = -result.scores.col(k);
        }
    }
    return result;
}

// mean over projections of each projection's summed explained-variance ratio
template <typename Scalar>
Scalar explained_variance_summary(const std::vector<Pca<Scalar>>& projections) {
    if (projections.empty())
        throw DegenerateInputError("variance summary: no projections");
    Scalar acc = 0;
    for (const auto& p : projections) acc += p.explained_variance_ratio.sum();
    return acc / Scalar(projections.size());
}

}  // namespace sensoria
