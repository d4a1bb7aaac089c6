#include "coarsekit/moduli.hpp"

#include <algorithm>
#include <cmath>

namespace coarsekit {

void MappedSample::validate() const {
    source.validate();
    image.validate();
    if (source.labels != image.labels)
        throw std::invalid_argument("MappedSample: label mismatch");
}

std::vector<PairDistance> MappedSample::pairs() const {
    std::vector<PairDistance> out;
    const std::size_t n = source.size();
    out.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            out.push_back({i, j,
                           source.space.metric(source.points[i], source.points[j]),
                           image.dist(i, j)});
    return out;
}

ModulusProfile empirical_moduli(const std::vector<PairDistance>& pairs,
                                std::vector<double> thresholds) {
    ModulusProfile p;
    std::sort(thresholds.begin(), thresholds.end());
    p.thresholds = std::move(thresholds);
    for (double t : p.thresholds) {
        if (!(t > 0.0)) throw std::invalid_argument("thresholds must be > 0");
        double phi = kInf, omega = 0.0;
        std::size_t nge = 0, nle = 0;
        for (const auto& pr : pairs) {
            if (pr.source >= t) {
                phi = std::min(phi, pr.image);
                ++nge;
            }
            if (pr.source <= t) {
                omega = std::max(omega, pr.image);
                ++nle;
            }
        }
        p.phi.push_back(phi);
        p.omega.push_back(omega);
        p.count_ge.push_back(nge);
        p.count_le.push_back(nle);
    }
    return p;
}

ModulusProfile empirical_moduli(const MappedSample& sample,
                                std::vector<double> thresholds) {
    if (sample.source.size() < 2)
        throw std::invalid_argument("empirical_moduli: need >= 2 points");
    return empirical_moduli(sample.pairs(), std::move(thresholds));
}

MappedSample evaluate_map(const PointSet& sample, const SqDistKernel& sqdist,
                          double tol) {
    const auto n = static_cast<Eigen::Index>(sample.size());
    KernelMatrix N;
    N.labels = sample.labels;
    N.entries = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double v = sqdist(sample.points[static_cast<std::size_t>(i)],
                              sample.points[static_cast<std::size_t>(j)]);
            N.entries(i, j) = v;
            N.entries(j, i) = v;
        }
    MappedSample ms;
    ms.source = sample;
    ms.image = embedding_from_nd(N, sample.labels.front(), tol);
    return ms;
}

std::vector<PairDistance> rescaled_pairs(const PointSet& sample,
                                         const SqDistKernel& sqdist, double a) {
    std::vector<PairDistance> out;
    const std::size_t n = sample.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            Vec ax = vec_scale(sample.points[i], a);
            Vec ay = vec_scale(sample.points[j], a);
            out.push_back({i, j,
                           sample.space.metric(sample.points[i], sample.points[j]),
                           std::sqrt(sqdist(ax, ay))});
        }
    return out;
}

std::vector<double> g_f_modulus(const InvariantFunctionTable& f,
                                const std::vector<double>& thresholds) {
    std::vector<double> out;
    Vec zero(f.space.dim, 0.0);
    for (double t : thresholds) {
        double best = kInf;
        for (std::size_t i = 0; i < f.support.size(); ++i)
            if (f.space.metric(f.support.points[i], zero) >= t)
                best = std::min(best, 1.0 - f.values[i]);
        out.push_back(best);
    }
    return out;
}

std::vector<double> rho_f_modulus(const InvariantFunctionTable& f,
                                  const std::vector<double>& thresholds) {
    std::vector<double> out;
    Vec zero(f.space.dim, 0.0);
    for (double t : thresholds) {
        double best = kInf;
        for (std::size_t i = 0; i < f.support.size(); ++i)
            if (f.space.metric(f.support.points[i], zero) >= t)
                best = std::min(best, f.values[i]);
        out.push_back(best);
    }
    return out;
}

GrowthReport growth_check(const KernelMatrix& N, const PointSet& points,
                          const std::string& x_label, int n, double tol) {
    GrowthReport rep;
    rep.tolerance = tol;
    std::size_t x_idx = points.index_of(x_label);
    const Vec& x = points.points[x_idx];
    Vec zero(points.space.dim, 0.0);
    std::size_t zero_idx = points.find_point(zero);
    if (zero_idx == PointSet::npos)
        throw std::invalid_argument("growth_check: origin not in sample");
    auto f_at = [&](const Vec& y) {
        std::size_t i = points.find_point(y);
        if (i == PointSet::npos)
            throw std::invalid_argument("growth_check: chain point missing: " +
                                        coord_label(y));
        return N.entries(static_cast<Eigen::Index>(i),
                         static_cast<Eigen::Index>(zero_idx));
    };
    double fx = f_at(x);
    rep.passed = true;
    for (int k = 1; k <= n; ++k) {
        GrowthRow row;
        row.k = k;
        row.f_kx = f_at(vec_scale(x, k));
        row.bound = static_cast<double>(k) * k * fx;
        row.ok = row.f_kx <= row.bound + tol;
        if (!row.ok) rep.passed = false;
        rep.rows.push_back(row);
    }
    // subadditivity sqrt(f(u+v)) <= sqrt(f(u)) + sqrt(f(v)) where u+v lands
    // in the sample
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i; j < points.size(); ++j) {
            Vec sum = vec_add(points.points[i], points.points[j]);
            std::size_t k = points.find_point(sum);
            if (k == PointSet::npos) continue;
            double lhs = std::sqrt(std::max(0.0, f_at(sum)));
            double rhs = std::sqrt(std::max(0.0, f_at(points.points[i]))) +
                         std::sqrt(std::max(0.0, f_at(points.points[j])));
            ++rep.subadditive_checked;
            if (lhs > rhs + tol) {
                ++rep.subadditive_failed;
                rep.passed = false;
            }
        }
    return rep;
}

PropagationReport propagation_check(const InvariantFunctionTable& f, double t,
                                    double s, double p, double tol) {
    if (!(0.0 < t && t < s)) throw std::invalid_argument("need 0 < t < s");
    PropagationReport rep;
    rep.t = t;
    rep.s = s;

    const InvariantFunctionTable* nd = &f;
    InvariantFunctionTable derived;
    if (f.at_origin() == 1.0) {  // PD form: work on 1-f, report the g form
        derived = function_transforms(f, FunctionOp::OneMinus);
        nd = &derived;
        rep.has_g_form = true;
    }

    Vec zero(nd->space.dim, 0.0);
    auto rho_with_witness = [&](double thr, Vec* witness) {
        double best = kInf;
        for (std::size_t i = 0; i < nd->support.size(); ++i) {
            if (nd->space.metric(nd->support.points[i], zero) < thr) continue;
            if (nd->values[i] < best) {
                best = nd->values[i];
                if (witness) *witness = nd->support.points[i];
            }
        }
        return best;
    };

    rep.rho_t = rho_with_witness(t, &rep.witness);
    rep.rho_s = rho_with_witness(s, nullptr);
    if (!std::isfinite(rep.rho_t) || !std::isfinite(rep.rho_s)) {
        rep.inconclusive = true;
        rep.note = "no support point beyond threshold";
        return rep;
    }
    rep.bound = 4.0 * rep.rho_t * std::pow(s / t, 2.0 / p);

    // the proof walks multiples of the witness until ||n x||^p >= s; the
    // whole chain must live in the support or the check is inconclusive
    int n = 1;
    while (nd->space.metric(vec_scale(rep.witness, n), zero) < s) ++n;
    rep.chain_length = n;
    for (int k = 0; k <= n; ++k) {
        if (!nd->has(vec_scale(rep.witness, k))) {
            rep.inconclusive = true;
            rep.note = "witness chain leaves the support at k=" +
                       std::to_string(k);
            return rep;
        }
    }

    rep.passed = rep.rho_s <= rep.bound + tol;
    if (rep.has_g_form) {
        rep.g_t = rep.rho_t;
        rep.g_s = rep.rho_s;
        rep.g_bound = rep.bound;
    }
    return rep;
}

}  // namespace coarsekit
