#include "coarsekit/embeddings.hpp"

#include <cmath>

namespace coarsekit {

double EmbeddingCoordinates::dist2(std::size_t i, std::size_t j) const {
    return (vectors.row(static_cast<Eigen::Index>(i)) -
            vectors.row(static_cast<Eigen::Index>(j)))
        .squaredNorm();
}

double EmbeddingCoordinates::dist(std::size_t i, std::size_t j) const {
    return std::sqrt(dist2(i, j));
}

void EmbeddingCoordinates::validate() const {
    if (vectors.rows() != static_cast<Eigen::Index>(labels.size()))
        throw std::invalid_argument("EmbeddingCoordinates: row/label mismatch");
    if (vectors.cols() > vectors.rows() && vectors.rows() > 0)
        throw std::invalid_argument("EmbeddingCoordinates: dim exceeds count");
    if (!vectors.allFinite())
        throw std::invalid_argument("EmbeddingCoordinates: non-finite entry");
}

EmbeddingCoordinates feature_map_from_pd(const KernelMatrix& K, double tol) {
    auto verdict = is_positive_definite(K, tol);
    if (!verdict.passed)
        throw DefinitenessError("feature_map_from_pd: kernel fails PD",
                                std::move(verdict));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K.entries);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("feature_map_from_pd: eigensolver failed");
    const auto n = K.entries.rows();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < n; ++k)
        if (es.eigenvalues()(k) > 0.0) keep.push_back(k);
    EmbeddingCoordinates out;
    out.labels = K.labels;
    out.vectors.resize(n, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c)
        out.vectors.col(static_cast<Eigen::Index>(c)) =
            std::sqrt(es.eigenvalues()(keep[c])) * es.eigenvectors().col(keep[c]);
    return out;
}

EmbeddingCoordinates embedding_from_nd(const KernelMatrix& N,
                                       const std::string& basepoint,
                                       double tol) {
    auto verdict = is_negative_definite(N, tol);
    if (!verdict.passed)
        throw DefinitenessError("embedding_from_nd: kernel fails ND",
                                std::move(verdict));
    for (Eigen::Index i = 0; i < N.entries.rows(); ++i)
        if (std::abs(N.entries(i, i)) > tol)
            throw std::invalid_argument("embedding_from_nd: nonzero diagonal");
    return feature_map_from_pd(pd_from_nd(N, basepoint), tol);
}

EmbeddingCoordinates sphere_embedding_from_pd_function(
    const InvariantFunctionTable& f, const PointSet& points, double tol) {
    if (f.at_origin() != 1.0)
        throw std::invalid_argument(
            "sphere_embedding_from_pd_function: f(0) != 1");
    return feature_map_from_pd(kernel_from_function(f, points), tol);
}

KernelMatrix gaussian_gram(const EmbeddingCoordinates& coords) {
    const auto n = coords.vectors.rows();
    KernelMatrix K;
    K.labels = coords.labels;
    K.entries.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        K.entries(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double v = std::exp(
                -(coords.vectors.row(i) - coords.vectors.row(j)).squaredNorm());
            K.entries(i, j) = v;
            K.entries(j, i) = v;
        }
    }
    return K;
}

EmbeddingCoordinates gaussian_sphere_embedding(const EmbeddingCoordinates& coords,
                                               double tol) {
    return feature_map_from_pd(gaussian_gram(coords), tol);
}

}  // namespace coarsekit
