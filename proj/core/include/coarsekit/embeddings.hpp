#pragma once

#include "coarsekit/kernels.hpp"

namespace coarsekit {

/// Finite-dimensional Euclidean coordinates realizing a kernel.  Rows of
/// `vectors` are the images; coordinates are defined only up to an
/// orthogonal transform, so comparisons go through Gram/distance matrices.
struct EmbeddingCoordinates {
    std::vector<std::string> labels;
    Eigen::MatrixXd vectors;  // n x m, m <= n

    std::size_t size() const { return labels.size(); }
    int dim() const { return static_cast<int>(vectors.cols()); }
    Eigen::VectorXd row(std::size_t i) const { return vectors.row(static_cast<Eigen::Index>(i)); }
    double dist(std::size_t i, std::size_t j) const;
    double dist2(std::size_t i, std::size_t j) const;
    Eigen::MatrixXd gram() const { return vectors * vectors.transpose(); }
    void validate() const;
};

/// Factor a PD kernel as a Gram matrix: rows T_i with <T_i,T_j> = K_ij.
/// Eigenvalues in [-tol, 0) are clamped to 0; anything below -tol aborts
/// with the PD failure certificate.
EmbeddingCoordinates feature_map_from_pd(const KernelMatrix& K, double tol);

/// Realize a zero-diagonal ND kernel as squared Euclidean distances,
/// with the basepoint mapped to the origin.
EmbeddingCoordinates embedding_from_nd(const KernelMatrix& N,
                                       const std::string& basepoint,
                                       double tol);

/// Unit-sphere embedding of a PD function with f(0)=1:
/// ||T(x)-T(y)||^2 = 2(1 - f(x-y)), ||T(x)|| = 1.
EmbeddingCoordinates sphere_embedding_from_pd_function(
    const InvariantFunctionTable& f, const PointSet& points, double tol);

/// Unit-sphere embedding of Euclidean points via the Gaussian kernel
/// e^{-||x-y||^2}: image distance^2 = 2(1 - e^{-d^2}).
EmbeddingCoordinates gaussian_sphere_embedding(const EmbeddingCoordinates& coords,
                                               double tol);

/// Gram matrix of the Gaussian kernel e^{-||x_i - x_j||^2} over rows.
KernelMatrix gaussian_gram(const EmbeddingCoordinates& coords);

/// Error thrown when a kernel handed to an embedding routine fails its
/// definiteness precondition; carries the verdict with certificate.
struct DefinitenessError : std::runtime_error {
    DefinitenessVerdict verdict;
    explicit DefinitenessError(std::string what, DefinitenessVerdict v)
        : std::runtime_error(std::move(what)), verdict(std::move(v)) {}
};

}  // namespace coarsekit
