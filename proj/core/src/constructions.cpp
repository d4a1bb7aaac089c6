#include "coarsekit/constructions.hpp"

#include <algorithm>
#include <cmath>

namespace coarsekit {

SqDistKernel SphereMapModel::as_sqdist() const {
    auto g = gram;
    return [g](std::span<const double> x, std::span<const double> y) {
        return 2.0 * (1.0 - g(x, y));
    };
}

SphereMapModel gaussian_sphere_model() {
    SphereMapModel m;
    m.gram = [](std::span<const double> x, std::span<const double> y) {
        return std::exp(-euclid_dist2(x, y));
    };
    return m;
}

ChainBoundReport chain_bound_check(const SqDistKernel& sqdist,
                                   const QuasiNormedSpace& space, const Vec& x,
                                   const Vec& y, double rho2_at_1) {
    ChainBoundReport rep;
    rep.norm_xy = space.quasi_norm(vec_sub(y, x));
    if (std::pow(rep.norm_xy, space.p) < 1.0)
        throw std::invalid_argument("chain_bound_check: need ||x-y||^p >= 1");
    rep.n = static_cast<int>(std::ceil(rep.norm_xy));
    rep.image_dist = std::sqrt(std::max(0.0, sqdist(x, y)));
    rep.bound = 2.0 * rho2_at_1 * rep.norm_xy;

    Vec step = vec_scale(vec_sub(y, x), 1.0 / rep.n);
    Vec prev = x;
    rep.links_short = true;
    for (int i = 1; i <= rep.n; ++i) {
        Vec cur = i == rep.n ? y : vec_add(x, vec_scale(step, i));
        double link = std::sqrt(std::max(0.0, sqdist(prev, cur)));
        rep.link_lengths.push_back(link);
        rep.telescoped += link;
        if (space.quasi_norm(vec_sub(cur, prev)) > 1.0 + 1e-12)
            rep.links_short = false;
        prev = cur;
    }
    rep.passed = rep.links_short && rep.image_dist <= rep.telescoped + 1e-12 &&
                 rep.telescoped <= rep.n * rho2_at_1 + 1e-12 &&
                 rep.n * rho2_at_1 < rep.bound + 1e-12;
    return rep;
}

EmbeddingCoordinates snowflake_map(const KernelMatrix& image_sqdist, double r,
                                   double tol) {
    if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("need 0 < r <= 1");
    if (r == 1.0)
        return embedding_from_nd(image_sqdist, image_sqdist.labels.front(), tol);
    KernelMatrix Nr = snowflake_power(image_sqdist, r);
    return embedding_from_nd(Nr, Nr.labels.front(), tol);
}

InvariantFunctionTable translation_average(const SqDistKernel& sqdist,
                                           const PointSet& sample,
                                           const PointSet& window) {
    if (window.size() == 0)
        throw std::invalid_argument("translation_average: empty window");
    PointSet support;
    support.space = sample.space;
    for (std::size_t i = 0; i < sample.size(); ++i)
        for (std::size_t j = 0; j < sample.size(); ++j) {
            Vec d = vec_sub(sample.points[i], sample.points[j]);
            if (support.find_point(d) == PointSet::npos) {
                support.labels.push_back(coord_label(d));
                support.points.push_back(std::move(d));
            }
        }
    InvariantFunctionTable f;
    f.space = sample.space;
    f.support = support;
    f.values.reserve(support.size());
    const double inv = 1.0 / (2.0 * static_cast<double>(window.size()));
    for (const auto& x : support.points) {
        double acc = 0.0;
        for (const auto& z : window.points) {
            double fwd = sqdist(vec_add(z, x), z);
            double bwd = sqdist(vec_sub(z, x), z);
            acc += fwd + bwd;
        }
        f.values.push_back(acc * inv);
    }
    return f;
}

QualityReport averaged_kernel_quality(const InvariantFunctionTable& f_hat,
                                      const PointSet& sample, double a,
                                      double p, double tol) {
    QualityReport rep;
    const auto& sup = f_hat.support;
    Vec zero(f_hat.space.dim, 0.0);
    std::vector<double> norm_p(sup.size());
    for (std::size_t i = 0; i < sup.size(); ++i)
        norm_p[i] = f_hat.space.metric(sup.points[i], zero);

    rep.holder_ok = true;
    for (std::size_t i = 0; i < sup.size(); ++i)
        for (std::size_t j = i + 1; j < sup.size(); ++j) {
            double lhs = std::abs(f_hat.values[i] - f_hat.values[j]);
            double dxy = f_hat.space.metric(sup.points[i], sup.points[j]);
            double rhs = (std::pow(norm_p[i], a) + std::pow(norm_p[j], a)) *
                         std::pow(dxy, a);
            double excess = lhs - rhs;
            rep.holder_max_excess = std::max(rep.holder_max_excess, excess);
            if (excess > tol) rep.holder_ok = false;
        }

    auto upper_holds = [&](double scale) {
        for (std::size_t i = 0; i < sup.size(); ++i)
            if (f_hat.values[i] / scale > std::pow(norm_p[i], 2.0 * a) + tol)
                return false;
        return true;
    };
    if (upper_holds(1.0)) {
        rep.upper_ok = true;
    } else if (upper_holds(2.0)) {
        rep.upper_ok = true;
        rep.rescale = 2.0;
    }

    rep.nd = is_negative_definite(kernel_from_function(f_hat, sample),
                                  std::max(tol, 1e-12));
    rep.passed = rep.holder_ok && rep.upper_ok;
    return rep;
}

AssemblyReport strong_uniform_assembly(const InvariantFunctionTable& f_hat,
                                       const PointSet& sample, double tol) {
    AssemblyReport rep;
    KernelMatrix K = kernel_from_function(f_hat, sample);
    rep.embedding = embedding_from_nd(K, sample.labels.front(), tol);

    double max_f = 0.0;
    for (double v : f_hat.values) max_f = std::max(max_f, std::abs(v));
    std::vector<double> thresholds;
    rep.identity_ok = true;
    for (std::size_t i = 0; i < sample.size(); ++i)
        for (std::size_t j = i + 1; j < sample.size(); ++j) {
            double d = sample.space.metric(sample.points[i], sample.points[j]);
            thresholds.push_back(d);
            double err = std::abs(rep.embedding.dist2(i, j) -
                                  K.entries(static_cast<Eigen::Index>(i),
                                            static_cast<Eigen::Index>(j)));
            rep.identity_max_err = std::max(rep.identity_max_err, err);
            if (err > 1e-8 * std::max(1.0, max_f)) rep.identity_ok = false;
        }
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                     thresholds.end());

    MappedSample ms{sample, rep.embedding};
    rep.profile = empirical_moduli(ms, thresholds);
    auto rho = rho_f_modulus(f_hat, rep.profile.thresholds);
    rep.phi_bound_ok = true;
    for (std::size_t k = 0; k < rep.profile.thresholds.size(); ++k) {
        if (!std::isfinite(rho[k])) continue;
        double floor = std::sqrt(std::max(0.0, rho[k]));
        if (rep.profile.phi[k] < floor - 1e-8) rep.phi_bound_ok = false;
    }
    rep.passed = rep.identity_ok && rep.phi_bound_ok;
    return rep;
}

namespace {

struct PairGrid {
    std::vector<std::pair<std::size_t, std::size_t>> idx;
    std::vector<double> source;
};

PairGrid make_pair_grid(const PointSet& sample) {
    PairGrid g;
    for (std::size_t i = 0; i < sample.size(); ++i)
        for (std::size_t j = i + 1; j < sample.size(); ++j) {
            g.idx.emplace_back(i, j);
            g.source.push_back(
                sample.space.metric(sample.points[i], sample.points[j]));
        }
    return g;
}

double omega_at(const SphereMapModel& base, const PointSet& sample,
                const PairGrid& g, double a, double t) {
    double w = 0.0;
    for (std::size_t k = 0; k < g.idx.size(); ++k) {
        if (g.source[k] > t) continue;
        auto [i, j] = g.idx[k];
        Vec ax = vec_scale(sample.points[i], a);
        Vec ay = vec_scale(sample.points[j], a);
        w = std::max(w, std::sqrt(std::max(0.0, base.sqdist(ax, ay))));
    }
    return w;
}

double phi_at(const SphereMapModel& base, const PointSet& sample,
              const PairGrid& g, double a, double t) {
    double w = kInf;
    for (std::size_t k = 0; k < g.idx.size(); ++k) {
        if (g.source[k] < t) continue;
        auto [i, j] = g.idx[k];
        Vec ax = vec_scale(sample.points[i], a);
        Vec ay = vec_scale(sample.points[j], a);
        w = std::min(w, std::sqrt(std::max(0.0, base.sqdist(ax, ay))));
    }
    return w;
}

}  // namespace

void ScaleFamily::validate(double slack) const {
    if (scales.empty()) throw std::invalid_argument("ScaleFamily: empty");
    double prev_s = 0.0;
    for (const auto& e : scales) {
        if (!(e.s > prev_s))
            throw std::invalid_argument("ScaleFamily: s_n not increasing");
        prev_s = e.s;
        for (std::size_t i = 0; i < e.map.image.size(); ++i)
            if (std::abs(e.map.image.row(i).norm() - 1.0) > 1e-10)
                throw std::invalid_argument("ScaleFamily: image off sphere");
        auto pd = e.map.pairs();
        double omega = 0.0, phi = kInf;
        for (const auto& pr : pd) {
            if (pr.source <= std::sqrt(static_cast<double>(e.n)))
                omega = std::max(omega, pr.image);
            if (pr.source >= e.s) phi = std::min(phi, pr.image);
        }
        if (omega > std::pow(2.0, -e.n) + slack)
            throw std::invalid_argument("ScaleFamily: omega bound violated");
        if (phi < delta * delta_fraction - slack)
            throw std::invalid_argument("ScaleFamily: phi floor violated");
    }
}

ScaleFamily build_scale_family(const SphereMapModel& base,
                               const PointSet& sample, double delta_fraction,
                               int n_max, double tol) {
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    PairGrid g = make_pair_grid(sample);
    if (g.idx.empty())
        throw std::invalid_argument("build_scale_family: need >= 2 points");

    std::vector<double> probes = g.source;
    std::sort(probes.begin(), probes.end());
    probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
    const double t_max = probes.back();

    ScaleFamily fam;
    fam.n_max = n_max;
    fam.delta_fraction = delta_fraction;
    fam.delta = phi_at(base, sample, g, 1.0, t_max);
    if (!(fam.delta > 0.0))
        throw std::invalid_argument(
            "build_scale_family: base map has no large-scale separation "
            "(phi at largest probe is zero)");
    if (omega_at(base, sample, g, 1e-8, t_max) > 1e-3)
        throw std::invalid_argument(
            "build_scale_family: base map omega does not vanish at small "
            "scales");

    double prev_s = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        const double target = std::pow(2.0, -n);
        const double root_n = std::sqrt(static_cast<double>(n));
        double a_n;
        if (omega_at(base, sample, g, 1.0, root_n) <= target) {
            a_n = 1.0;
        } else {
            double lo = -10.0, hi = 2.0;  // log10(a)
            if (omega_at(base, sample, g, std::pow(10.0, lo), root_n) > target)
                throw std::runtime_error(
                    "build_scale_family: bisection cannot reach 2^-n; "
                    "achieved " +
                    std::to_string(omega_at(base, sample, g, std::pow(10.0, lo),
                                            root_n)));
            for (int it = 0; it < 60; ++it) {
                double mid = 0.5 * (lo + hi);
                if (omega_at(base, sample, g, std::pow(10.0, mid), root_n) <=
                    target)
                    lo = mid;
                else
                    hi = mid;
            }
            a_n = std::pow(10.0, lo);
        }

        double s_n = 0.0;
        const double floor = fam.delta * delta_fraction;
        for (double t : probes) {
            if (t <= prev_s) continue;
            if (phi_at(base, sample, g, a_n, t) >= floor) {
                s_n = t;
                break;
            }
        }
        if (s_n == 0.0)
            throw std::runtime_error(
                "build_scale_family: no threshold below the sample diameter "
                "reaches the phi floor at scale n=" +
                std::to_string(n));
        prev_s = s_n;

        // materialize T_n by factoring its Gram matrix
        const auto m = static_cast<Eigen::Index>(sample.size());
        KernelMatrix G;
        G.labels = sample.labels;
        G.entries.resize(m, m);
        for (Eigen::Index i = 0; i < m; ++i) {
            for (Eigen::Index j = i; j < m; ++j) {
                Vec ax = vec_scale(sample.points[static_cast<std::size_t>(i)], a_n);
                Vec ay = vec_scale(sample.points[static_cast<std::size_t>(j)], a_n);
                double v = base.gram(ax, ay);
                G.entries(i, j) = v;
                G.entries(j, i) = v;
            }
        }
        ScaleEntry entry;
        entry.n = n;
        entry.a = a_n;
        entry.s = s_n;
        entry.map.source = sample;
        entry.map.image = feature_map_from_pd(G, tol);
        fam.scales.push_back(std::move(entry));
    }
    fam.validate();
    return fam;
}

double StepFunctionEnvelope::rho1(double t) const {
    std::size_t below = 0;
    for (double b : breakpoints)
        if (t >= b) ++below;
    return values[std::min(below, values.size() - 1)];
}

GlueResult dg_glue(const ScaleFamily& family, const PointSet& sample,
                   const std::string& basepoint) {
    family.validate();
    const std::size_t b = sample.index_of(basepoint);
    const std::size_t n_pts = sample.size();

    GlueResult res;
    Eigen::Index total = 0;
    for (const auto& e : family.scales) total += e.map.image.vectors.cols();
    res.glued.labels = sample.labels;
    res.glued.vectors.resize(static_cast<Eigen::Index>(n_pts), total);
    Eigen::Index off = 0;
    for (const auto& e : family.scales) {
        const auto& V = e.map.image.vectors;
        for (std::size_t i = 0; i < n_pts; ++i)
            res.glued.vectors.block(static_cast<Eigen::Index>(i), off, 1,
                                    V.cols()) =
                V.row(static_cast<Eigen::Index>(i)) -
                V.row(static_cast<Eigen::Index>(b));
        off += V.cols();
    }

    res.envelope.level = family.delta * family.delta_fraction;
    for (const auto& e : family.scales) res.envelope.breakpoints.push_back(e.s);
    res.envelope.values.push_back(0.0);
    for (std::size_t k = 1; k <= family.scales.size(); ++k)
        res.envelope.values.push_back(res.envelope.level *
                                      std::sqrt(static_cast<double>(k)));

    const double eps_trunc = std::pow(4.0, -family.n_max) / 3.0;
    const double level2 = res.envelope.level * res.envelope.level;
    res.upper_ok = res.lower_ok = res.rho1_ok = true;
    for (std::size_t i = 0; i < n_pts; ++i)
        for (std::size_t j = i + 1; j < n_pts; ++j) {
            // blockwise sum in scale order; this is the glued map's norm
            double d2 = 0.0;
            Eigen::Index o = 0;
            for (const auto& e : family.scales) {
                Eigen::Index w = e.map.image.vectors.cols();
                d2 += (res.glued.vectors.block(static_cast<Eigen::Index>(i), o,
                                               1, w) -
                       res.glued.vectors.block(static_cast<Eigen::Index>(j), o,
                                               1, w))
                          .squaredNorm();
                o += w;
            }
            res.pair_dist2.push_back(d2);

            double d = sample.space.metric(sample.points[i], sample.points[j]);
            double upper = 4.0 * d * d + 1.0 / 3.0 + eps_trunc;
            if (d2 > upper + 1e-9) res.upper_ok = false;
            res.max_upper_excess = std::max(res.max_upper_excess, d2 - upper);

            std::size_t big = 0;  // N-1 with s_{N-1} <= d < s_N
            for (const auto& e : family.scales)
                if (d >= e.s) ++big;
            double lower = level2 * static_cast<double>(big);
            if (d2 < lower - 1e-9) res.lower_ok = false;
            res.max_lower_deficit = std::max(res.max_lower_deficit, lower - d2);

            if (res.envelope.rho1(d) > std::sqrt(d2) + 1e-9) res.rho1_ok = false;
        }
    res.passed = res.upper_ok && res.lower_ok && res.rho1_ok;
    return res;
}

PipelineResult pipeline_coarse_to_strong_uniform(const QuasiNormedSpace& space,
                                                 const PointSet& sample,
                                                 const SqDistKernel& coarse_map,
                                                 const PipelineConfig& config) {
    PipelineResult res;
    const double tol = config.tol;
    auto fail = [&](StageReport rep) {
        rep.passed = false;
        res.stages.push_back(std::move(rep));
        res.passed = false;
        return res;
    };

    // normalize so that the chain-reduced Lipschitz bound holds: rescale by
    // 1/(2 rho2(1)), rho2(1) read off the sample
    double c = 1.0;
    {
        StageReport rep;
        rep.stage = "normalize";
        double rho2_1 = 0.0;
        for (std::size_t i = 0; i < sample.size(); ++i)
            for (std::size_t j = i + 1; j < sample.size(); ++j)
                if (space.metric(sample.points[i], sample.points[j]) <= 1.0)
                    rho2_1 = std::max(
                        rho2_1, std::sqrt(std::max(
                                    0.0, coarse_map(sample.points[i],
                                                    sample.points[j]))));
        if (config.normalize && rho2_1 > 0.0) c = 1.0 / (2.0 * rho2_1);
        rep.details["rho2_at_1"] = rho2_1;
        rep.details["scale"] = c;
        rep.passed = true;
        for (std::size_t i = 0; i < sample.size() && rep.passed; ++i)
            for (std::size_t j = i + 1; j < sample.size(); ++j) {
                double d = space.metric(sample.points[i], sample.points[j]);
                if (d < 1.0) continue;
                double img = c * std::sqrt(std::max(
                                     0.0, coarse_map(sample.points[i],
                                                     sample.points[j])));
                if (img > d + tol) {
                    rep.passed = false;
                    rep.note = "Lipschitz reduction fails at pair (" +
                               sample.labels[i] + ", " + sample.labels[j] + ")";
                    break;
                }
            }
        if (!rep.passed) return fail(std::move(rep));
        res.stages.push_back(std::move(rep));
    }

    const double c2 = c * c;
    const double r = space.p / 2.0;
    const double a = r / space.p;  // = 1/2
    res.holder_exponent = a;
    SqDistKernel snow = [c2, r, &coarse_map](std::span<const double> x,
                                             std::span<const double> y) {
        return std::pow(c2 * std::max(0.0, coarse_map(x, y)), r);
    };

    {
        StageReport rep;
        rep.stage = "snowflake";
        rep.details["r"] = r;
        rep.details["a"] = a;
        const auto n = static_cast<Eigen::Index>(sample.size());
        KernelMatrix N;
        N.labels = sample.labels;
        N.entries = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j) {
                double v = snow(sample.points[static_cast<std::size_t>(i)],
                                sample.points[static_cast<std::size_t>(j)]);
                N.entries(i, j) = v;
                N.entries(j, i) = v;
            }
        auto nd = is_negative_definite(N, tol);
        rep.details["nd_extremal"] = nd.extremal_eigenvalue;
        rep.passed = nd.passed;
        if (!nd.passed) {
            rep.note = "snowflaked kernel fails ND";
            rep.certificate = nd;
            return fail(std::move(rep));
        }
        // Hoelder bound on in-sample pairs with d >= 1
        for (std::size_t i = 0; i < sample.size() && rep.passed; ++i)
            for (std::size_t j = i + 1; j < sample.size(); ++j) {
                double d = space.metric(sample.points[i], sample.points[j]);
                if (d < 1.0) continue;
                double img = std::sqrt(
                    std::max(0.0, snow(sample.points[i], sample.points[j])));
                if (img > std::pow(d, a) + tol) {
                    rep.passed = false;
                    rep.note = "Hoelder bound fails at (" + sample.labels[i] +
                               ", " + sample.labels[j] + ")";
                    break;
                }
            }
        if (!rep.passed) return fail(std::move(rep));
        res.stages.push_back(std::move(rep));
    }

    InvariantFunctionTable f_hat;
    {
        StageReport rep;
        rep.stage = "translation_average";
        PointSet window = sample_grid(space, config.window_radius,
                                      config.window_step);
        f_hat = translation_average(snow, sample, window);
        rep.details["window_size"] = static_cast<double>(window.size());
        rep.details["support_size"] = static_cast<double>(f_hat.support.size());
        rep.details["f_at_0"] = f_hat.at_origin();
        rep.passed = f_hat.at_origin() == 0.0;
        try {
            f_hat.validate();
        } catch (const std::exception& e) {
            rep.passed = false;
            rep.note = e.what();
        }
        if (!rep.passed) return fail(std::move(rep));
        res.stages.push_back(std::move(rep));
    }

    {
        StageReport rep;
        rep.stage = "averaged_kernel_quality";
        auto q = averaged_kernel_quality(f_hat, sample, a, space.p, tol);
        rep.details["holder_max_excess"] = q.holder_max_excess;
        rep.details["rescale"] = q.rescale;
        rep.details["nd_extremal"] = q.nd.extremal_eigenvalue;
        rep.passed = q.passed;
        if (!q.nd.passed) rep.certificate = q.nd;
        if (!rep.passed) {
            rep.note = "averaged kernel fails its quality bounds";
            return fail(std::move(rep));
        }
        if (q.rescale != 1.0)
            for (auto& v : f_hat.values) v /= q.rescale;
        res.stages.push_back(std::move(rep));
    }

    {
        StageReport rep;
        rep.stage = "strong_uniform_assembly";
        try {
            auto asm_rep = strong_uniform_assembly(f_hat, sample, tol);
            rep.details["identity_max_err"] = asm_rep.identity_max_err;
            rep.details["embedding_dim"] =
                static_cast<double>(asm_rep.embedding.dim());
            double phi_min = kInf;
            for (double v : asm_rep.profile.phi)
                if (std::isfinite(v)) phi_min = std::min(phi_min, v);
            rep.details["phi_min"] = phi_min;
            rep.passed = asm_rep.passed && phi_min > 0.0;
            if (!rep.passed) rep.note = "final embedding modulus check failed";
            res.assembly = std::move(asm_rep);
        } catch (const DefinitenessError& e) {
            rep.passed = false;
            rep.note = e.what();
            rep.certificate = e.verdict;
        }
        bool ok = rep.passed;
        res.stages.push_back(std::move(rep));
        if (!ok) {
            res.passed = false;
            res.f_hat = std::move(f_hat);
            return res;
        }
    }

    res.f_hat = std::move(f_hat);
    res.passed = true;
    return res;
}

}  // namespace coarsekit
