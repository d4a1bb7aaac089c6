#pragma once

#include <limits>

#include "coarsekit/embeddings.hpp"

namespace coarsekit {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// One source/image distance pair of a mapped sample.
struct PairDistance {
    std::size_t i = 0, j = 0;
    double source = 0.0;
    double image = 0.0;
};

/// A finite point set together with its image under a map into Euclidean
/// space; the empirical stand-in for the mapping T.
struct MappedSample {
    PointSet source;
    EmbeddingCoordinates image;

    std::vector<PairDistance> pairs() const;
    void validate() const;  // labels identical and ordered alike
};

/// Sampled graph of t -> (phi(t), omega(t)).  phi is +inf and omega 0
/// when no pair qualifies; counts record how many pairs each value ranges
/// over.
struct ModulusProfile {
    std::vector<double> thresholds;
    std::vector<double> phi;
    std::vector<double> omega;
    std::vector<std::size_t> count_ge;
    std::vector<std::size_t> count_le;
};

ModulusProfile empirical_moduli(const MappedSample& sample,
                                std::vector<double> thresholds);
ModulusProfile empirical_moduli(const std::vector<PairDistance>& pairs,
                                std::vector<double> thresholds);

/// Evaluable map given by its squared image distance.
using SqDistKernel =
    std::function<double(std::span<const double>, std::span<const double>)>;

/// Materializes a MappedSample for an evaluable map by embedding the
/// kernel of squared image distances.
MappedSample evaluate_map(const PointSet& sample, const SqDistKernel& sqdist,
                          double tol);

/// Pair list of the rescaled map T_a(x) = T(ax) over the same sample.
/// Source distances are those of the unscaled sample; qualifying sets are
/// shared with the (aS, T) enumeration so the transfer identity
/// phi_{T_a,S}(t) = phi_{T,aS}(a^p t) is exact.
std::vector<PairDistance> rescaled_pairs(const PointSet& sample,
                                         const SqDistKernel& sqdist, double a);

/// g_f(t) = inf { 1 - f(x) : d(x,0) >= t } over the support.
std::vector<double> g_f_modulus(const InvariantFunctionTable& f,
                                const std::vector<double>& thresholds);

/// rho_f(t) = inf { f(x) : ||x||^p >= t } over the support.
std::vector<double> rho_f_modulus(const InvariantFunctionTable& f,
                                  const std::vector<double>& thresholds);

struct GrowthRow {
    int k = 0;
    double f_kx = 0.0;
    double bound = 0.0;  // k^2 f(x)
    bool ok = false;
};

struct GrowthReport {
    bool passed = false;
    double tolerance = 0.0;
    std::vector<GrowthRow> rows;
    // subadditivity sqrt(f(x+y)) <= sqrt(f(x)) + sqrt(f(y)) on in-sample sums
    std::size_t subadditive_checked = 0;
    std::size_t subadditive_failed = 0;
};

/// Checks f(kx) <= k^2 f(x) along the chain {kx} read off the kernel N,
/// where f(y) = N(y, 0).  Points are located in `points` by coordinates.
GrowthReport growth_check(const KernelMatrix& N, const PointSet& points,
                          const std::string& x_label, int n, double tol);

struct PropagationReport {
    bool passed = false;
    bool inconclusive = false;
    std::string note;
    double t = 0.0, s = 0.0;
    double rho_t = 0.0, rho_s = 0.0;
    double bound = 0.0;  // 4 rho(t) (s/t)^{2/p}
    Vec witness;
    int chain_length = 0;
    // g_f form of the same inequality, reported when f is PD-normalized
    bool has_g_form = false;
    double g_t = 0.0, g_s = 0.0, g_bound = 0.0;
};

/// Verifies rho_f(s) <= 4 rho_f(t) (s/t)^{2/p} on the support, walking the
/// witness chain the proof uses; inconclusive when the chain leaves the
/// sample.
PropagationReport propagation_check(const InvariantFunctionTable& f, double t,
                                    double s, double p, double tol = 1e-8);

}  // namespace coarsekit
