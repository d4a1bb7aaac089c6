#include "coarsekit/kernels.hpp"

#include <cmath>

namespace coarsekit {

void KernelMatrix::validate() const {
    const auto n = static_cast<Eigen::Index>(labels.size());
    if (entries.rows() != n || entries.cols() != n)
        throw std::invalid_argument("KernelMatrix: shape/label mismatch");
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!std::isfinite(entries(i, j)))
                throw std::invalid_argument("KernelMatrix: non-finite entry");
            if (entries(i, j) != entries(j, i))
                throw std::invalid_argument("KernelMatrix: not symmetric");
        }
}

double KernelMatrix::max_abs() const {
    return entries.size() == 0 ? 0.0 : entries.cwiseAbs().maxCoeff();
}

double InvariantFunctionTable::at(std::span<const double> x) const {
    std::size_t i = support.find_point(x);
    if (i != PointSet::npos) return values[i];
    // fallback for coordinates that differ only in the last bits
    double best = 1e-9;
    std::size_t best_i = PointSet::npos;
    for (std::size_t k = 0; k < support.size(); ++k) {
        double d2 = euclid_dist2(support.points[k], x);
        if (d2 < best * best) {
            best_i = k;
            best = std::sqrt(d2);
        }
    }
    if (best_i == PointSet::npos)
        throw std::invalid_argument("function table: point outside support " +
                                    coord_label(x));
    return values[best_i];
}

bool InvariantFunctionTable::has(std::span<const double> x) const {
    if (support.find_point(x) != PointSet::npos) return true;
    for (std::size_t k = 0; k < support.size(); ++k)
        if (euclid_dist2(support.points[k], x) < 1e-18) return true;
    return false;
}

double InvariantFunctionTable::at_origin() const {
    return at(Vec(space.dim, 0.0));
}

void InvariantFunctionTable::validate() const {
    if (values.size() != support.size())
        throw std::invalid_argument("function table: value count mismatch");
    at_origin();  // throws if 0 missing
    for (std::size_t i = 0; i < support.size(); ++i) {
        Vec neg = vec_neg(support.points[i]);
        if (at(neg) != values[i])
            throw std::invalid_argument("function table: f(-x) != f(x) at " +
                                        support.labels[i]);
    }
}

KernelMatrix distance_kernel(const PointSet& points) {
    const auto n = static_cast<Eigen::Index>(points.size());
    KernelMatrix N;
    N.labels = points.labels;
    N.entries = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double d = points.space.metric(points.points[i], points.points[j]);
            N.entries(i, j) = d;
            N.entries(j, i) = d;
        }
    return N;
}

DefinitenessVerdict is_positive_definite(const KernelMatrix& K, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
    K.validate();
    DefinitenessVerdict v;
    v.kind = DefinitenessKind::PD;
    v.tolerance = tol;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K.entries);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("is_positive_definite: eigensolver failed");
    v.extremal_eigenvalue = es.eigenvalues()(0);
    v.passed = v.extremal_eigenvalue >= -tol;
    if (!v.passed) v.certificate = es.eigenvectors().col(0);
    return v;
}

DefinitenessVerdict is_negative_definite(const KernelMatrix& N, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
    N.validate();
    DefinitenessVerdict v;
    v.kind = DefinitenessKind::ND;
    v.tolerance = tol;
    const auto n = static_cast<Eigen::Index>(N.size());
    if (n <= 1) {  // no nonzero mean-zero vector exists
        v.passed = true;
        return v;
    }
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n) -
                        Eigen::MatrixXd::Constant(n, n, 1.0 / n);
    Eigen::MatrixXd PNP = P * N.entries * P;
    PNP = 0.5 * (PNP + PNP.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(PNP);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("is_negative_definite: eigensolver failed");
    v.extremal_eigenvalue = es.eigenvalues()(n - 1);
    v.passed = v.extremal_eigenvalue <= tol;
    if (!v.passed) {
        Eigen::VectorXd c = P * es.eigenvectors().col(n - 1);
        c -= Eigen::VectorXd::Constant(n, c.sum() / n);  // pin the mean to 0
        v.certificate = c / c.norm();
    }
    return v;
}

KernelMatrix schoenberg_exp(const KernelMatrix& N, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("t must be > 0");
    KernelMatrix K;
    K.labels = N.labels;
    K.entries = (-t * N.entries).array().exp();
    return K;
}

KernelMatrix snowflake_power(const KernelMatrix& N, double a) {
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("need 0 < a < 1");
    if (N.entries.size() > 0 && N.entries.minCoeff() < 0.0)
        throw std::invalid_argument("snowflake_power: negative entry");
    KernelMatrix K;
    K.labels = N.labels;
    K.entries = N.entries.array().pow(a);
    return K;
}

KernelMatrix pd_from_nd(const KernelMatrix& N, const std::string& basepoint) {
    N.validate();
    Eigen::Index b = -1;
    for (std::size_t i = 0; i < N.labels.size(); ++i)
        if (N.labels[i] == basepoint) b = static_cast<Eigen::Index>(i);
    if (b < 0)
        throw std::invalid_argument("pd_from_nd: unknown basepoint " + basepoint);
    const auto n = static_cast<Eigen::Index>(N.size());
    KernelMatrix K;
    K.labels = N.labels;
    K.entries.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            K.entries(i, j) =
                0.5 * (N.entries(i, b) + N.entries(j, b) - N.entries(i, j));
    return K;
}

KernelMatrix kernel_from_function(const InvariantFunctionTable& f,
                                  const PointSet& points) {
    const auto n = static_cast<Eigen::Index>(points.size());
    KernelMatrix F;
    F.labels = points.labels;
    F.entries.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) {
            Vec diff = vec_sub(points.points[i], points.points[j]);
            if (!f.has(diff))
                throw std::invalid_argument(
                    "kernel_from_function: difference of pair (" +
                    points.labels[i] + ", " + points.labels[j] +
                    ") outside support");
            double val = f.at(diff);
            F.entries(i, j) = val;
            F.entries(j, i) = val;
        }
    return F;
}

InvariantFunctionTable function_transforms(const InvariantFunctionTable& f,
                                           FunctionOp op, std::string* warning) {
    double f0 = f.at_origin();
    if (warning) {
        if (op == FunctionOp::OneMinus && f0 != 1.0)
            *warning = "one_minus expects f(0)=1";
        else if (op == FunctionOp::ExpNeg && f0 != 0.0)
            *warning = "exp_neg expects f(0)=0";
        else
            warning->clear();
    }
    InvariantFunctionTable out = f;
    for (auto& v : out.values)
        v = op == FunctionOp::OneMinus ? 1.0 - v : std::exp(-v);
    return out;
}

bool witness_validate_nd(const KernelMatrix& N, const Eigen::VectorXd& c,
                         double tol) {
    if (c.size() != static_cast<Eigen::Index>(N.size()))
        throw std::invalid_argument("witness_validate: size mismatch");
    if (std::abs(c.sum()) > 1e-12) return false;
    return c.dot(N.entries * c) > tol;
}

bool witness_validate_pd(const KernelMatrix& K, const Eigen::VectorXd& c,
                         double tol) {
    if (c.size() != static_cast<Eigen::Index>(K.size()))
        throw std::invalid_argument("witness_validate: size mismatch");
    return c.dot(K.entries * c) < -tol;
}

InvariantFunctionTable make_function_table(
    const QuasiNormedSpace& space, const PointSet& support,
    const std::function<double(std::span<const double>)>& f) {
    InvariantFunctionTable t;
    t.space = space;
    t.support = support;
    t.values.reserve(support.size());
    for (const auto& x : support.points) t.values.push_back(f(x));
    return t;
}

}  // namespace coarsekit
