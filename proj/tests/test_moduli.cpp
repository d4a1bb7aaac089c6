#include <doctest.h>

#include <random>

#include "coarsekit/constructions.hpp"

using namespace coarsekit;

namespace {

MappedSample identity_sample(const std::vector<double>& xs) {
    auto s = QuasiNormedSpace::make(1, 2.0);
    MappedSample m;
    m.source.space = s;
    m.image.vectors.resize(static_cast<Eigen::Index>(xs.size()), 1);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        m.source.points.push_back(Vec{xs[i]});
        m.source.labels.push_back(coord_label(Vec{xs[i]}));
        m.image.vectors(static_cast<Eigen::Index>(i), 0) = xs[i];
    }
    m.image.labels = m.source.labels;
    return m;
}

}  // namespace

TEST_CASE("empirical_moduli on {0,1,3} under the identity") {
    auto m = identity_sample({0.0, 1.0, 3.0});
    CHECK_NOTHROW(m.validate());
    auto pr = m.pairs();
    CHECK(pr.size() == 3);

    auto prof = empirical_moduli(m, {0.5, 2.0, 4.0});
    // t = 0.5: every pair has source >= 0.5, none has source <= 0.5
    CHECK(prof.phi[0] == doctest::Approx(1.0));
    CHECK(prof.omega[0] == 0.0);
    CHECK(prof.count_le[0] == 0);
    // t = 2: pairs with source >= 2 are (0,3) and (1,3); min image 2;
    // pairs with source <= 2 are (0,1) and (1,3); max image 2
    CHECK(prof.phi[1] == doctest::Approx(2.0));
    CHECK(prof.omega[1] == doctest::Approx(2.0));
    CHECK(prof.count_ge[1] == 2);
    CHECK(prof.count_le[1] == 2);
    // t = 4 exceeds the diameter: phi = +inf, omega = max over all
    CHECK(prof.phi[2] == kInf);
    CHECK(prof.omega[2] == doctest::Approx(3.0));
}

TEST_CASE("empirical_moduli of a constant map collapses omega") {
    auto m = identity_sample({0.0, 1.0, 3.0});
    m.image.vectors.setZero();
    auto prof = empirical_moduli(m, {1.0, 2.0});
    CHECK(prof.phi[0] == 0.0);
    CHECK(prof.omega[0] == 0.0);
    CHECK(prof.omega[1] == 0.0);
}

TEST_CASE("profile sandwich: phi <= image <= omega on qualifying pairs") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    auto s = QuasiNormedSpace::make(2, 2.0);
    PointSet ps{s, {}, {}};
    for (int i = 0; i < 12; ++i) {
        ps.points.push_back(Vec{u(rng), u(rng)});
        ps.labels.push_back("p" + std::to_string(i));
    }
    auto sample = evaluate_map(ps, gaussian_sphere_model().as_sqdist(), 1e-8);
    auto pairs = sample.pairs();
    std::vector<double> ts{0.5, 1.0, 2.0, 3.5};
    auto prof = empirical_moduli(pairs, ts);
    for (std::size_t k = 0; k < ts.size(); ++k) {
        for (const auto& pd : pairs) {
            if (pd.source >= ts[k]) CHECK(prof.phi[k] <= pd.image + 1e-12);
            if (pd.source <= ts[k]) CHECK(prof.omega[k] >= pd.image - 1e-12);
        }
        if (k > 0) {
            // phi and omega are both nondecreasing in t
            CHECK(prof.phi[k] >= prof.phi[k - 1]);
            CHECK(prof.omega[k] >= prof.omega[k - 1]);
        }
    }
}

TEST_CASE("evaluate_map of the identity kernel reproduces source distances") {
    auto s = QuasiNormedSpace::make(2, 2.0);
    auto grid = sample_grid(s, 1, 1.0);
    SqDistKernel ident = [](std::span<const double> x, std::span<const double> y) {
        return euclid_dist2(x, y);
    };
    auto m = evaluate_map(grid, ident, 1e-8);
    for (const auto& pd : m.pairs())
        CHECK(pd.image == doctest::Approx(pd.source).epsilon(1e-9));
}

TEST_CASE("rescaled_pairs agrees with evaluating the scaled sample") {
    auto s = QuasiNormedSpace::make(1, 2.0);
    auto grid = sample_grid(s, 3, 1.0);
    auto sq = gaussian_sphere_model().as_sqdist();
    double a = 2.0;

    auto scaled = grid;
    for (auto& pt : scaled.points) pt = vec_scale(pt, a);

    auto left = rescaled_pairs(grid, sq, a);       // T_a over S
    auto right = evaluate_map(scaled, sq, 1e-8);   // T over aS
    auto rp = right.pairs();
    REQUIRE(left.size() == rp.size());
    std::vector<double> ts{0.5, 1.0, 2.0};
    auto pl = empirical_moduli(left, ts);
    std::vector<double> ats{a * 0.5, a * 1.0, a * 2.0};  // p = 1 here
    auto prr = empirical_moduli(rp, ats);
    for (std::size_t k = 0; k < ts.size(); ++k) {
        CHECK(pl.phi[k] == doctest::Approx(prr.phi[k]).epsilon(1e-12));
        CHECK(pl.omega[k] == doctest::Approx(prr.omega[k]).epsilon(1e-12));
        CHECK(pl.count_ge[k] == prr.count_ge[k]);
        CHECK(pl.count_le[k] == prr.count_le[k]);
    }
    // a = 1 is the plain evaluation
    auto unit = rescaled_pairs(grid, sq, 1.0);
    auto plain = evaluate_map(grid, sq, 1e-8).pairs();
    for (std::size_t i = 0; i < unit.size(); ++i) {
        CHECK(unit[i].source == doctest::Approx(plain[i].source).epsilon(1e-12));
        CHECK(unit[i].image == doctest::Approx(plain[i].image).epsilon(1e-9));
    }
}

TEST_CASE("g_f_modulus reference values") {
    auto s = QuasiNormedSpace::make(1, 1.0);
    auto supp = sample_grid(s, 3, 1.0);
    auto h = make_function_table(s, supp, [](std::span<const double> x) {
        return std::exp(-x[0] * x[0]);
    });
    auto g = g_f_modulus(h, {2.0, 4.0});
    CHECK(g[0] == doctest::Approx(1.0 - std::exp(-4.0)).epsilon(1e-14));
    CHECK(g[1] == kInf);  // nothing at distance >= 4 on this support

    auto ones = make_function_table(s, supp, [](std::span<const double>) {
        return 1.0;
    });
    CHECK(g_f_modulus(ones, {1.0})[0] == 0.0);
}

TEST_CASE("rho_f_modulus reference values and the 1-h identity") {
    auto s = QuasiNormedSpace::make(1, 1.0);
    auto supp = sample_grid(s, 3, 1.0);
    auto f = make_function_table(s, supp, [](std::span<const double> x) {
        return x[0] * x[0];
    });
    auto r = rho_f_modulus(f, {0.5, 2.0});
    CHECK(r[0] == doctest::Approx(1.0));  // grid: smallest |x| >= 0.5 is 1
    CHECK(r[1] == doctest::Approx(4.0));

    auto zero = make_function_table(s, supp, [](std::span<const double>) {
        return 0.0;
    });
    CHECK(rho_f_modulus(zero, {1.0})[0] == 0.0);

    // rho_{1-h} equals g_h exactly (same scan, same arithmetic)
    auto h = make_function_table(s, supp, [](std::span<const double> x) {
        return std::exp(-x[0] * x[0]);
    });
    auto one_minus = function_transforms(h, FunctionOp::OneMinus);
    std::vector<double> ts{0.5, 1.0, 2.0, 3.0};
    auto lhs = rho_f_modulus(one_minus, ts);
    auto rhs = g_f_modulus(h, ts);
    for (std::size_t k = 0; k < ts.size(); ++k) CHECK(lhs[k] == rhs[k]);
}

TEST_CASE("growth_check accepts quadratic growth and flags a violation") {
    auto s = QuasiNormedSpace::make(1, 1.0);
    auto supp = sample_grid(s, 3, 1.0);
    PointSet pts{s, {"(0)", "(1)", "(2)", "(3)"},
                 {Vec{0.0}, Vec{1.0}, Vec{2.0}, Vec{3.0}}};

    auto f2 = make_function_table(s, supp, [](std::span<const double> x) {
        return x[0] * x[0];
    });
    auto N2 = kernel_from_function(f2, pts);
    auto ok = growth_check(N2, pts, "(1)", 3, 1e-10);
    CHECK(ok.passed);
    CHECK(ok.rows.size() == 3);
    CHECK(ok.rows[1].f_kx == doctest::Approx(4.0));
    CHECK(ok.rows[1].bound == doctest::Approx(4.0));
    CHECK(ok.subadditive_failed == 0);
    CHECK(ok.subadditive_checked > 0);

    auto f4 = make_function_table(s, supp, [](std::span<const double> x) {
        return std::pow(x[0], 4.0);
    });
    auto N4 = kernel_from_function(f4, pts);
    auto bad = growth_check(N4, pts, "(1)", 3, 1e-10);
    CHECK_FALSE(bad.passed);  // f(2) = 16 > 4 f(1)
}

TEST_CASE("propagation_check reference outcomes") {
    auto s = QuasiNormedSpace::make(1, 1.0);

    auto supp6 = sample_grid(s, 6, 1.0);
    auto f = make_function_table(s, supp6, [](std::span<const double> x) {
        return x[0] * x[0];
    });
    auto rep = propagation_check(f, 1.0, 3.0, 1.0);
    CHECK(rep.passed);
    CHECK_FALSE(rep.inconclusive);
    CHECK(rep.rho_t == doctest::Approx(1.0));
    CHECK(rep.rho_s == doctest::Approx(9.0));
    CHECK(rep.bound == doctest::Approx(36.0));
    CHECK_FALSE(rep.has_g_form);

    auto fa = make_function_table(s, supp6, [](std::span<const double> x) {
        return std::abs(x[0]);
    });
    auto rep2 = propagation_check(fa, 1.0, 4.0, 1.0);
    CHECK(rep2.passed);
    CHECK(rep2.bound == doctest::Approx(64.0));

    // PD-normalized input is handled through 1 - f and reported in g form
    auto h = make_function_table(s, supp6, [](std::span<const double> x) {
        return std::exp(-x[0] * x[0]);
    });
    auto rep3 = propagation_check(h, 1.0, 3.0, 1.0);
    CHECK(rep3.has_g_form);
    CHECK(rep3.passed);
    CHECK(rep3.g_t == doctest::Approx(1.0 - std::exp(-1.0)));

    CHECK_THROWS(propagation_check(f, 3.0, 1.0, 1.0));  // needs t < s
}

TEST_CASE("propagation_check is inconclusive off the sampled window") {
    auto s = QuasiNormedSpace::make(1, 1.0);
    // nothing at distance >= s
    auto supp2 = sample_grid(s, 2, 1.0);
    auto f = make_function_table(s, supp2, [](std::span<const double> x) {
        return x[0] * x[0];
    });
    auto rep = propagation_check(f, 1.0, 4.0, 1.0);
    CHECK(rep.inconclusive);
    CHECK_FALSE(rep.passed);

    // witness chain 0, 2, 4, 6 leaves a radius-5 support
    auto supp5 = sample_grid(s, 5, 1.0);
    auto g = make_function_table(s, supp5, [](std::span<const double> x) {
        return x[0] * x[0];
    });
    auto rep2 = propagation_check(g, 2.0, 5.0, 1.0);
    CHECK(rep2.inconclusive);
    CHECK(rep2.note.find("chain") != std::string::npos);
}
