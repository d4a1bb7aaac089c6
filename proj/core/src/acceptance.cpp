#include "coarsekit/acceptance.hpp"

#include <cmath>
#include <ostream>
#include <random>
#include <sstream>

#include "coarsekit/io.hpp"

namespace coarsekit::acceptance {

namespace {

struct EmittedCertificate {
    KernelMatrix matrix;
    Eigen::VectorXd witness;
    DefinitenessKind kind;
};

Eigen::MatrixXd random_points(std::mt19937& rng, int n, int dim) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd pts(n, dim);
    for (int i = 0; i < n; ++i)
        for (int d = 0; d < dim; ++d) pts(i, d) = gauss(rng);
    return pts;
}

KernelMatrix sq_dist_matrix(const Eigen::MatrixXd& pts) {
    const auto n = pts.rows();
    KernelMatrix N;
    for (Eigen::Index i = 0; i < n; ++i)
        N.labels.push_back("x" + std::to_string(i));
    N.entries = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double d2 = (pts.row(i) - pts.row(j)).squaredNorm();
            N.entries(i, j) = d2;
            N.entries(j, i) = d2;
        }
    return N;
}

/// Monte-Carlo ND oracle: fail iff some random mean-zero unit c has
/// c'Nc > tol.
bool mc_negative_definite(const KernelMatrix& N, std::mt19937& rng, int trials,
                          double tol) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto n = static_cast<Eigen::Index>(N.size());
    for (int t = 0; t < trials; ++t) {
        Eigen::VectorXd c(n);
        for (Eigen::Index i = 0; i < n; ++i) c(i) = gauss(rng);
        c -= Eigen::VectorXd::Constant(n, c.sum() / n);
        double norm = c.norm();
        if (norm == 0.0) continue;
        c /= norm;
        if (c.dot(N.entries * c) > tol) return false;
    }
    return true;
}

const std::vector<double> kSchoenbergTs = {0.01, 0.1, 1.0, 10.0};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

}  // namespace

std::vector<CriterionResult> run_all() {
    std::vector<CriterionResult> results;
    std::vector<EmittedCertificate> certs;

    // ---- shared corpus: 100 squared-Euclidean-distance matrices
    std::mt19937 rng(20240811);
    std::vector<KernelMatrix> good;
    for (int k = 0; k < 100; ++k) good.push_back(sq_dist_matrix(random_points(rng, 8, 3)));

    {  // 1: Schoenberg correspondence, both directions
        CriterionResult r{1, "Schoenberg correspondence", true, ""};
        for (const auto& N : good) {
            if (!is_negative_definite(N, 1e-8).passed) r.passed = false;
            for (double t : kSchoenbergTs)
                if (!is_positive_definite(schoenberg_exp(N, t), 1e-8).passed)
                    r.passed = false;
        }
        int corrupted_found = 0, both_fail = 0, attempts = 0;
        std::uniform_int_distribution<int> pick(0, 7);
        while (corrupted_found < 20 && attempts < 2000) {
            ++attempts;
            KernelMatrix N = sq_dist_matrix(random_points(rng, 8, 3));
            int i = pick(rng), j = pick(rng);
            if (i == j) continue;
            N.entries(i, j) *= 3.0;
            N.entries(j, i) = N.entries(i, j);
            auto nd = is_negative_definite(N, 1e-8);
            if (nd.passed || nd.extremal_eigenvalue < 1e-3) continue;
            ++corrupted_found;
            certs.push_back({N, *nd.certificate, DefinitenessKind::ND});
            bool some_pd_fail = false;
            for (double t : kSchoenbergTs) {
                auto K = schoenberg_exp(N, t);
                auto pd = is_positive_definite(K, 1e-8);
                if (!pd.passed) {
                    some_pd_fail = true;
                    certs.push_back({K, *pd.certificate, DefinitenessKind::PD});
                }
            }
            if (some_pd_fail) ++both_fail;
        }
        if (corrupted_found < 20 || both_fail < corrupted_found) r.passed = false;
        r.detail = "100 ND matrices, " + std::to_string(both_fail) +
                   "/20 corrupted fail both directions";
        results.push_back(r);
    }

    {  // 2: eigen verdict vs Monte-Carlo oracle
        CriterionResult r{2, "ND-test oracle agreement", true, ""};
        std::mt19937 rng2(777);
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        int checked = 0;
        for (int k = 0; k < 200; ++k) {
            KernelMatrix N;
            for (int i = 0; i < 5; ++i) N.labels.push_back("x" + std::to_string(i));
            if (k < 80) {  // genuinely ND: squared Euclidean distances
                N = sq_dist_matrix(random_points(rng2, 5, 3));
            } else {
                N.entries = Eigen::MatrixXd::Zero(5, 5);
                for (int i = 0; i < 5; ++i)
                    for (int j = i + 1; j < 5; ++j) {
                        N.entries(i, j) = uni(rng2);
                        N.entries(j, i) = N.entries(i, j);
                    }
            }
            auto nd = is_negative_definite(N, 1e-8);
            bool mc = mc_negative_definite(N, rng2, 10000, 1e-8);
            if (std::abs(nd.extremal_eigenvalue) > 1e-6 || nd.passed) {
                ++checked;
                if (nd.passed != mc) r.passed = false;
            }
            if (!nd.passed) certs.push_back({N, *nd.certificate, DefinitenessKind::ND});
        }
        r.detail = std::to_string(checked) + "/200 checked for agreement";
        results.push_back(r);
    }

    {  // 3: Moore-Schoenberg realization roundtrips
        CriterionResult r{3, "realization roundtrips", true, ""};
        double worst_nd = 0, worst_pd = 0, worst_norm = 0, worst_sphere = 0;
        for (std::size_t k = 0; k < good.size(); ++k) {
            const auto& N = good[k];
            auto emb = embedding_from_nd(N, N.labels.front(), 1e-8);
            double scale = N.max_abs();
            for (std::size_t i = 0; i < N.size(); ++i)
                for (std::size_t j = i + 1; j < N.size(); ++j) {
                    double rel = std::abs(emb.dist2(i, j) -
                                          N.entries(static_cast<Eigen::Index>(i),
                                                    static_cast<Eigen::Index>(j))) /
                                 scale;
                    worst_nd = std::max(worst_nd, rel);
                }
            auto K = schoenberg_exp(N, 1.0);
            auto fm = feature_map_from_pd(K, 1e-8);
            double err = (fm.gram() - K.entries).cwiseAbs().maxCoeff() / K.max_abs();
            worst_pd = std::max(worst_pd, err);
        }
        // sphere embeddings via the Gaussian kernel on the first 20 clouds
        std::mt19937 rng3(31337);
        for (int k = 0; k < 20; ++k) {
            EmbeddingCoordinates pts;
            pts.vectors = random_points(rng3, 8, 3);
            for (int i = 0; i < 8; ++i) pts.labels.push_back("x" + std::to_string(i));
            auto K = gaussian_gram(pts);
            auto sph = gaussian_sphere_embedding(pts, 1e-8);
            for (std::size_t i = 0; i < 8; ++i) {
                worst_norm = std::max(worst_norm,
                                      std::abs(sph.row(i).norm() - 1.0));
                for (std::size_t j = i + 1; j < 8; ++j) {
                    double want = 2.0 * (1.0 - K.entries(static_cast<Eigen::Index>(i),
                                                         static_cast<Eigen::Index>(j)));
                    worst_sphere = std::max(worst_sphere,
                                            std::abs(sph.dist2(i, j) - want));
                }
            }
        }
        r.passed = worst_nd <= 1e-8 && worst_pd <= 1e-8 && worst_norm <= 1e-10 &&
                   worst_sphere <= 1e-8;
        r.detail = "nd=" + fmt(worst_nd) + " pd=" + fmt(worst_pd) + " norm=" +
                   fmt(worst_norm) + " sphere=" + fmt(worst_sphere);
        results.push_back(r);
    }

    {  // 4: l_p metric negative definiteness + snowflake stability
        CriterionResult r{4, "l_p grid metric is ND", true, ""};
        for (double p : {0.25, 0.5, 1.0}) {
            auto space = QuasiNormedSpace::make(3, p);
            auto grid = sample_grid(space, 2, 1.0);
            auto N = distance_kernel(grid);
            auto nd = is_negative_definite(N, 1e-8);
            if (!nd.passed) {
                r.passed = false;
                certs.push_back({N, *nd.certificate, DefinitenessKind::ND});
            }
            for (double a : {0.25, 0.5, 0.75})
                if (!is_negative_definite(snowflake_power(N, a), 1e-8).passed)
                    r.passed = false;
        }
        r.detail = "125-point dim-3 grids, p in {0.25,0.5,1}, a in {0.25,0.5,0.75}";
        results.push_back(r);
    }

    {  // 5: growth lemma f(nx) <= n^2 f(x)
        CriterionResult r{5, "growth lemma", true, ""};
        std::mt19937 rng5(99);
        std::uniform_real_distribution<double> coeff(0.0, 2.0);
        std::uniform_real_distribution<double> expo(0.1, 2.0);
        auto space = QuasiNormedSpace::make(1, 1.0);
        PointSet base;
        base.space = space;
        base.labels = {"(0)"};
        base.points = {{0.0}};
        auto sample = multiples_closure(base, {1.0}, 5);
        for (int k = 0; k < 50; ++k) {
            double c1 = coeff(rng5), c2 = coeff(rng5);
            double e1 = expo(rng5), e2 = expo(rng5);
            KernelMatrix N;
            N.labels = sample.labels;
            const auto n = static_cast<Eigen::Index>(sample.size());
            N.entries = Eigen::MatrixXd::Zero(n, n);
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = i + 1; j < n; ++j) {
                    double d = std::abs(sample.points[static_cast<std::size_t>(i)][0] -
                                        sample.points[static_cast<std::size_t>(j)][0]);
                    double v = c1 * std::pow(d, e1) + c2 * std::pow(d, e2);
                    N.entries(i, j) = v;
                    N.entries(j, i) = v;
                }
            auto rep = growth_check(N, sample, sample.labels[1], 5, 1e-8);
            if (!rep.passed) r.passed = false;
        }
        // tightness: quadratic kernel achieves equality
        KernelMatrix Q;
        Q.labels = sample.labels;
        const auto n = static_cast<Eigen::Index>(sample.size());
        Q.entries = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                double d = sample.points[static_cast<std::size_t>(i)][0] -
                           sample.points[static_cast<std::size_t>(j)][0];
                Q.entries(i, j) = d * d;
            }
        auto rep = growth_check(Q, sample, sample.labels[1], 5, 1e-8);
        for (const auto& row : rep.rows)
            if (std::abs(row.f_kx - row.bound) > 1e-12) r.passed = false;
        r.detail = "50 random ND mixtures, quadratic tight";
        results.push_back(r);
    }

    {  // 6: propagation inequality rho(s) <= 4 rho(t) (s/t)^{2/p}
        CriterionResult r{6, "propagation inequality", true, ""};
        int runs = 0;
        for (double p : {0.5, 1.0}) {
            auto space = QuasiNormedSpace::make(1, p);
            auto grid = sample_grid(space, 60, 1.0);
            std::vector<std::function<double(double)>> fns = {
                [](double x) { return x * x; },
                [](double x) { return std::abs(x); },
                [](double x) { return std::pow(std::abs(x), 0.5); },
                [](double x) { return std::pow(std::abs(x), 1.5); },
            };
            for (const auto& fn : fns) {
                auto table = make_function_table(
                    space, grid,
                    [&](std::span<const double> x) { return fn(x[0]); });
                for (auto [t, s] : std::vector<std::pair<double, double>>{
                         {1, 2}, {1, 4}, {2, 5}}) {
                    auto rep = propagation_check(table, t, s, p, 1e-8);
                    ++runs;
                    if (!rep.passed || rep.inconclusive) {
                        r.passed = false;
                        r.detail = "fails at p=" + fmt(p) + " (t,s)=(" + fmt(t) +
                                   "," + fmt(s) + ") " + rep.note;
                    }
                }
            }
        }
        if (r.passed) r.detail = std::to_string(runs) + " (f,p,t,s) combinations";
        results.push_back(r);
    }

    {  // 7: Gaussian sphere map matches its closed-form moduli
        CriterionResult r{7, "Gaussian closed-form moduli", true, ""};
        auto space = QuasiNormedSpace::make(1, 2.0);
        auto grid = sample_grid(space, 5, 1.0);
        EmbeddingCoordinates pts;
        pts.labels = grid.labels;
        pts.vectors.resize(static_cast<Eigen::Index>(grid.size()), 1);
        for (std::size_t i = 0; i < grid.size(); ++i)
            pts.vectors(static_cast<Eigen::Index>(i), 0) = grid.points[i][0];
        auto sph = gaussian_sphere_embedding(pts, 1e-8);
        MappedSample ms{grid, sph};
        std::vector<double> ts;
        for (int t = 1; t <= 10; ++t) ts.push_back(t);
        auto prof = empirical_moduli(ms, ts);
        double worst = 0.0;
        for (std::size_t k = 0; k < ts.size(); ++k) {
            double want = std::sqrt(2.0 * (1.0 - std::exp(-ts[k] * ts[k])));
            worst = std::max(worst, std::abs(prof.phi[k] - want));
            worst = std::max(worst, std::abs(prof.omega[k] - want));
            if (!(prof.phi[k] > 0.0)) r.passed = false;
            if (prof.omega[k] > std::sqrt(2.0) * ts[k] + 1e-10) r.passed = false;
        }
        if (worst > 1e-10) r.passed = false;
        r.detail = "max |modulus - closed form| = " + fmt(worst);
        results.push_back(r);
    }

    {  // 8: Dadarlat-Guentner gluing with explicit constants
        CriterionResult r{8, "DG gluing constants", true, ""};
        try {
            auto space = QuasiNormedSpace::make(1, 2.0);
            auto grid = sample_grid(space, 25, 1.0);
            auto base = gaussian_sphere_model();
            auto fam = build_scale_family(base, grid, 0.5, 4, 1e-8);
            auto glue = dg_glue(fam, grid, "(0)");
            r.passed = glue.passed;
            r.detail = "delta=" + fmt(fam.delta) + " s=[" +
                       fmt(fam.scales[0].s) + "," + fmt(fam.scales[1].s) + "," +
                       fmt(fam.scales[2].s) + "," + fmt(fam.scales[3].s) +
                       "] upper_excess=" + fmt(glue.max_upper_excess);
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = e.what();
        }
        results.push_back(r);
    }

    {  // 9: rescaling transfer identity, zero tolerance
        CriterionResult r{9, "rescaling transfer identity", true, ""};
        auto space = QuasiNormedSpace::make(1, 2.0);
        auto grid = sample_grid(space, 5, 1.0);
        auto gauss = gaussian_sphere_model();
        auto sq = gauss.as_sqdist();
        for (double a : {0.5, 2.0}) {
            auto pairs_a = rescaled_pairs(grid, sq, a);  // (T_a, S)
            // (T, aS): same image values, source distances of the scaled set
            auto pairs_scaled = pairs_a;
            for (auto& pr : pairs_scaled)
                pr.source = space.metric(vec_scale(grid.points[pr.i], a),
                                         vec_scale(grid.points[pr.j], a));
            std::vector<double> ts;
            for (const auto& pr : pairs_a) ts.push_back(pr.source);
            std::sort(ts.begin(), ts.end());
            ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
            std::vector<double> ts_scaled;
            const double ap = std::pow(a, space.p);
            for (double t : ts) ts_scaled.push_back(ap * t);
            auto left = empirical_moduli(pairs_a, ts);
            auto right = empirical_moduli(pairs_scaled, ts_scaled);
            for (std::size_t k = 0; k < ts.size(); ++k) {
                if (left.phi[k] != right.phi[k]) r.passed = false;
                if (left.omega[k] != right.omega[k]) r.passed = false;
            }
        }
        r.detail = "a in {0.5, 2}, bit-exact profiles";
        results.push_back(r);
    }

    PipelineResult pipe;
    {  // 10: full coarse-to-strong-uniform pipeline on the Gaussian input
        CriterionResult r{10, "pipeline fidelity", true, ""};
        auto space = QuasiNormedSpace::make(1, 2.0);
        auto grid = sample_grid(space, 5, 1.0);
        auto gauss = gaussian_sphere_model();
        PipelineConfig cfg;
        cfg.window_radius = 3;
        pipe = pipeline_coarse_to_strong_uniform(space, grid, gauss.as_sqdist(),
                                                 cfg);
        r.passed = pipe.passed;
        if (pipe.assembly) {
            const auto& prof = pipe.assembly->profile;
            const double a = pipe.holder_exponent;
            for (std::size_t k = 0; k < prof.thresholds.size(); ++k) {
                if (std::isfinite(prof.phi[k]) && !(prof.phi[k] > 0.0))
                    r.passed = false;
                if (prof.omega[k] >
                    std::pow(prof.thresholds[k], a) + 1e-8)
                    r.passed = false;
            }
        } else {
            r.passed = false;
        }
        for (const auto& st : pipe.stages)
            if (!st.passed) r.detail += st.stage + " failed; ";
        if (r.detail.empty())
            r.detail = std::to_string(pipe.stages.size()) + " stages green";
        results.push_back(r);
    }

    {  // 11: every emitted certificate re-validates independently
        CriterionResult r{11, "certificate soundness", true, ""};
        int unsound = 0;
        for (const auto& c : certs) {
            bool ok = c.kind == DefinitenessKind::ND
                          ? witness_validate_nd(c.matrix, c.witness, 1e-8)
                          : witness_validate_pd(c.matrix, c.witness, 1e-8);
            if (!ok) ++unsound;
        }
        for (const auto& st : pipe.stages)
            if (st.certificate && st.certificate->certificate) ++unsound;
        r.passed = unsound == 0;
        r.detail = std::to_string(certs.size()) + " certificates, " +
                   std::to_string(unsound) + " unsound";
        results.push_back(r);
    }

    return results;
}

bool run_and_report(std::ostream& os) {
    auto results = run_all();
    bool all = true;
    for (const auto& r : results) {
        os << (r.passed ? "PASS" : "FAIL") << " criterion " << r.id << ": "
           << r.name << " (" << r.detail << ")\n";
        if (!r.passed) all = false;
    }
    return all;
}

}  // namespace coarsekit::acceptance
