#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "coarsekit/spaces.hpp"

namespace coarsekit {

/// Labeled symmetric real kernel matrix over a finite point set.
struct KernelMatrix {
    std::vector<std::string> labels;
    Eigen::MatrixXd entries;

    std::size_t size() const { return labels.size(); }
    void validate() const;  // symmetry + finiteness
    double max_abs() const;
};

enum class DefinitenessKind { PD, ND };

/// Outcome of a definiteness test.  On failure the certificate is a
/// vector c independently witnessing the violation: c'Kc < -tol for PD,
/// c mean-zero with c'Nc > tol for ND.
struct DefinitenessVerdict {
    DefinitenessKind kind;
    bool passed = false;
    double extremal_eigenvalue = 0.0;
    double tolerance = 0.0;
    std::optional<Eigen::VectorXd> certificate;
};

/// Values of an even function f on a finite support closed under
/// negation.  Lookup is by exact coordinates with a tolerant fallback.
struct InvariantFunctionTable {
    QuasiNormedSpace space;
    PointSet support;
    std::vector<double> values;  // parallel to support.points

    double at(std::span<const double> x) const;
    bool has(std::span<const double> x) const;
    double at_origin() const;
    void validate() const;  // f(-x) == f(x), f(0) present
};

KernelMatrix distance_kernel(const PointSet& points);

DefinitenessVerdict is_positive_definite(const KernelMatrix& K, double tol);
DefinitenessVerdict is_negative_definite(const KernelMatrix& N, double tol);

/// Entrywise exp(-t*N).
KernelMatrix schoenberg_exp(const KernelMatrix& N, double t);

/// Entrywise N^a for 0 < a < 1; requires nonnegative entries.
KernelMatrix snowflake_power(const KernelMatrix& N, double a);

/// K_ij = (N_ib + N_jb - N_ij)/2 with b the basepoint row; turns a
/// zero-diagonal ND kernel into a PD Gram kernel with K_bb = 0.
KernelMatrix pd_from_nd(const KernelMatrix& N, const std::string& basepoint);

/// F_ij = f(x_i - x_j); every pairwise difference must lie in f's support.
KernelMatrix kernel_from_function(const InvariantFunctionTable& f,
                                  const PointSet& points);

enum class FunctionOp { OneMinus, ExpNeg };

/// Pointwise 1-f or exp(-f) on the same support.  Returns a warning via
/// the optional out-parameter when the f(0) convention is off.
InvariantFunctionTable function_transforms(const InvariantFunctionTable& f,
                                           FunctionOp op,
                                           std::string* warning = nullptr);

/// Independent certificate checkers.  An ND-violation witness is a
/// mean-zero c with c'Nc > tol; a PD-violation witness has c'Kc < -tol.
bool witness_validate_nd(const KernelMatrix& N, const Eigen::VectorXd& c,
                         double tol);
bool witness_validate_pd(const KernelMatrix& K, const Eigen::VectorXd& c,
                         double tol);

/// Builds a table from an explicit function over a support set.
InvariantFunctionTable make_function_table(
    const QuasiNormedSpace& space, const PointSet& support,
    const std::function<double(std::span<const double>)>& f);

}  // namespace coarsekit
