#pragma once

#include <cmath>
#include <map>

#include "coarsekit/moduli.hpp"

namespace coarsekit {

/// Unit-sphere-valued map given through its Gram function k(x,y) with
/// k(x,x) = 1; image distance^2 = 2(1 - k(x,y)).
struct SphereMapModel {
    std::function<double(std::span<const double>, std::span<const double>)> gram;

    double sqdist(std::span<const double> x, std::span<const double> y) const {
        return 2.0 * (1.0 - gram(x, y));
    }
    SqDistKernel as_sqdist() const;
};

/// The Gaussian sphere map: gram(x,y) = e^{-||x-y||_2^2}.
SphereMapModel gaussian_sphere_model();

struct ChainBoundReport {
    bool passed = false;
    int n = 0;                  // chain length, n-1 < ||x-y|| <= n
    double norm_xy = 0.0;       // ||x-y|| (quasi-norm)
    double image_dist = 0.0;    // ||T(x)-T(y)||
    double telescoped = 0.0;    // sum of chain-link image lengths
    double bound = 0.0;         // 2 rho2(1) ||x-y||
    std::vector<double> link_lengths;
    bool links_short = false;   // every ||x_i - x_{i-1}|| <= 1
};

/// Walks the chain x_i = x + i(y-x)/n and verifies the telescoping bound
/// ||T(x)-T(y)|| <= sum of links <= n rho2(1) < 2 rho2(1) ||x-y||.
ChainBoundReport chain_bound_check(const SqDistKernel& sqdist,
                                   const QuasiNormedSpace& space, const Vec& x,
                                   const Vec& y, double rho2_at_1);

/// Re-embeds so that new distances are old distances to the power r:
/// snowflakes the squared-distance kernel, then realizes it.
EmbeddingCoordinates snowflake_map(const KernelMatrix& image_sqdist, double r,
                                   double tol);

/// Finite-window stand-in for the invariant mean:
/// f(x) = avg over z in W of (||T(z+x)-T(z)||^2 + ||T(z-x)-T(z)||^2)/2,
/// over the difference set of the sample.  The symmetrized form makes
/// f(-x) = f(x) hold to the bit.
InvariantFunctionTable translation_average(const SqDistKernel& sqdist,
                                           const PointSet& sample,
                                           const PointSet& window);

struct QualityReport {
    bool passed = false;
    bool holder_ok = false;       // averaged continuity bound
    double holder_max_excess = 0.0;
    bool upper_ok = false;        // f(x) <= (||x||^p)^{2a}
    double rescale = 1.0;         // 2 when the bound needs f/2
    DefinitenessVerdict nd;       // achieved (approximate) ND quality
};

/// Checks the continuity and sandwich bounds an averaged kernel must
/// satisfy, and reports its achieved definiteness quality.
QualityReport averaged_kernel_quality(const InvariantFunctionTable& f_hat,
                                      const PointSet& sample, double a,
                                      double p, double tol);

struct AssemblyReport {
    EmbeddingCoordinates embedding;
    ModulusProfile profile;
    bool identity_ok = false;  // ||S(x)-S(y)||^2 == f(x-y)
    double identity_max_err = 0.0;
    bool phi_bound_ok = false;  // phi(t) >= sqrt(rho_f(t))
    bool passed = false;
};

/// Realizes f as squared distances of a map S and verifies the final
/// embedding identities and modulus floor.
AssemblyReport strong_uniform_assembly(const InvariantFunctionTable& f_hat,
                                       const PointSet& sample, double tol);

struct ScaleEntry {
    int n = 0;
    double a = 0.0;   // rescale factor, T_n(x) = T(a x)
    double s = 0.0;   // threshold with phi_{T_n}(s) >= delta * fraction
    MappedSample map; // image on the unit sphere
};

struct ScaleFamily {
    std::vector<ScaleEntry> scales;
    double delta = 0.0;
    double delta_fraction = 0.5;
    int n_max = 0;

    /// Re-checks every invariant from the actual image coordinates.
    void validate(double slack = 1e-9) const;
};

/// Chooses a_n by bisection so that omega_{T_{a_n}}(sqrt(n)) <= 2^{-n},
/// estimates delta from the base map, picks strictly increasing s_n, and
/// returns the validated family.
ScaleFamily build_scale_family(const SphereMapModel& base,
                               const PointSet& sample, double delta_fraction,
                               int n_max, double tol);

/// Step lower envelope rho1 and the closed-form upper envelope rho2.
struct StepFunctionEnvelope {
    std::vector<double> breakpoints;  // s_1 < s_2 < ...
    std::vector<double> values;       // value on [s_k, s_{k+1}), k = 0..n_max
    double level = 0.0;               // delta/2

    double rho1(double t) const;
    static double rho2(double t) { return std::sqrt(4.0 * t * t + 1.0 / 3.0); }
};

struct GlueResult {
    EmbeddingCoordinates glued;
    StepFunctionEnvelope envelope;
    bool upper_ok = false;
    bool lower_ok = false;
    bool rho1_ok = false;
    bool passed = false;
    double max_upper_excess = 0.0;
    double max_lower_deficit = 0.0;
    /// Glued squared distance summed block-by-block in scale order.
    std::vector<double> pair_dist2;  // indexed like MappedSample pair order
};

/// Concatenates (T_n(x) - T_n(x_0)) over the family and verifies the
/// gluing bounds 4d^2 + 1/3 (+ truncation) above and (delta/2)^2 (N-1)
/// below for every sample pair.
GlueResult dg_glue(const ScaleFamily& family, const PointSet& sample,
                   const std::string& basepoint);

struct StageReport {
    std::string stage;
    bool passed = false;
    std::map<std::string, double> details;
    std::string note;
    std::optional<DefinitenessVerdict> certificate;
};

struct PipelineConfig {
    int window_radius = 3;
    double window_step = 1.0;
    double tol = 1e-8;
    bool normalize = true;
};

struct PipelineResult {
    std::vector<StageReport> stages;
    bool passed = false;
    std::optional<InvariantFunctionTable> f_hat;
    std::optional<AssemblyReport> assembly;
    double holder_exponent = 0.0;  // the a the final sandwich uses
};

/// Runs the coarse-to-strong-uniform pipeline: normalize, snowflake with
/// r = p/2, window-average, quality checks, final assembly.  Halts at the
/// first failing stage.
PipelineResult pipeline_coarse_to_strong_uniform(const QuasiNormedSpace& space,
                                                 const PointSet& sample,
                                                 const SqDistKernel& coarse_map,
                                                 const PipelineConfig& config);

}  // namespace coarsekit
