#include <doctest.h>

#include <random>

#include "coarsekit/embeddings.hpp"

using namespace coarsekit;

namespace {

KernelMatrix mk(std::vector<std::string> labels,
                std::initializer_list<std::initializer_list<double>> rows) {
    KernelMatrix k;
    k.labels = std::move(labels);
    auto n = static_cast<Eigen::Index>(k.labels.size());
    k.entries.resize(n, n);
    Eigen::Index i = 0;
    for (auto& r : rows) {
        Eigen::Index j = 0;
        for (double v : r) k.entries(i, j++) = v;
        ++i;
    }
    return k;
}

}  // namespace

TEST_CASE("feature_map_from_pd reproduces the Gram matrix") {
    auto K = mk({"a", "b"}, {{0.0, 0.0}, {0.0, 2.0}});
    auto T = feature_map_from_pd(K, 1e-10);
    CHECK(T.row(0).norm() == doctest::Approx(0.0));
    CHECK(T.row(1).squaredNorm() == doctest::Approx(2.0));
    CHECK((T.gram() - K.entries).cwiseAbs().maxCoeff() <= 1e-10);

    // random PSD Gram matrices round-trip
    std::mt19937 rng(55);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int it = 0; it < 20; ++it) {
        Eigen::MatrixXd A = Eigen::MatrixXd::NullaryExpr(
            6, 3, [&](Eigen::Index, Eigen::Index) { return g(rng); });
        KernelMatrix G;
        G.labels = {"1", "2", "3", "4", "5", "6"};
        G.entries = A * A.transpose();
        auto E = feature_map_from_pd(G, 1e-8);
        CHECK((E.gram() - G.entries).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("feature_map_from_pd throws with certificate on indefinite input") {
    auto F = mk({"a", "b"}, {{0.0, 1.0}, {1.0, 0.0}});
    try {
        feature_map_from_pd(F, 1e-10);
        FAIL("expected DefinitenessError");
    } catch (const DefinitenessError& e) {
        REQUIRE(e.verdict.certificate.has_value());
        CHECK(witness_validate_pd(F, *e.verdict.certificate, 1e-10));
    }
}

TEST_CASE("embedding_from_nd realizes squared distances") {
    auto T = mk({"a", "b"}, {{0.0, 2.0}, {2.0, 0.0}});
    auto E = embedding_from_nd(T, "a", 1e-10);
    CHECK(E.row(0).norm() == doctest::Approx(0.0));  // basepoint at origin
    CHECK(E.dist(0, 1) == doctest::Approx(std::sqrt(2.0)));

    // planar configuration: right triangle with legs 1,1
    auto N = mk({"o", "x", "y"},
                {{0.0, 1.0, 1.0}, {1.0, 0.0, 2.0}, {1.0, 2.0, 0.0}});
    auto P = embedding_from_nd(N, "o", 1e-10);
    CHECK(P.dist2(0, 1) == doctest::Approx(1.0));
    CHECK(P.dist2(0, 2) == doctest::Approx(1.0));
    CHECK(P.dist2(1, 2) == doctest::Approx(2.0));

    auto Z = mk({"a", "b"}, {{0.0, 0.0}, {0.0, 0.0}});
    auto EZ = embedding_from_nd(Z, "a", 1e-10);
    CHECK(EZ.dist(0, 1) == doctest::Approx(0.0));

    // non-ND input is rejected with a certificate
    auto B = mk({"a", "b"}, {{0.0, -1.0}, {-1.0, 0.0}});
    CHECK_THROWS_AS(embedding_from_nd(B, "a", 1e-10), DefinitenessError);
    // nonzero diagonal is rejected
    auto D = mk({"a", "b"}, {{1.0, 2.0}, {2.0, 0.0}});
    CHECK_THROWS(embedding_from_nd(D, "a", 1e-10));
}

TEST_CASE("sphere_embedding_from_pd_function") {
    auto s = QuasiNormedSpace::make(1, 2.0);
    auto supp = sample_grid(s, 2, 1.0);

    auto f = make_function_table(s, supp, [](std::span<const double> x) {
        return std::exp(-x[0] * x[0]);
    });
    PointSet pts{s, {"(0)", "(1)"}, {Vec{0.0}, Vec{1.0}}};
    auto E = sphere_embedding_from_pd_function(f, pts, 1e-10);
    CHECK(E.row(0).norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(E.row(1).norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(E.dist2(0, 1) == doctest::Approx(2.0 * (1.0 - std::exp(-1.0))));

    // constant 1 sends everything to one unit vector
    auto ones = make_function_table(s, supp, [](std::span<const double>) {
        return 1.0;
    });
    auto C = sphere_embedding_from_pd_function(ones, pts, 1e-10);
    CHECK(C.dist(0, 1) == doctest::Approx(0.0));
    CHECK(C.row(0).norm() == doctest::Approx(1.0));

    // f(0) must be exactly 1
    auto half = make_function_table(s, supp, [](std::span<const double>) {
        return 0.5;
    });
    CHECK_THROWS(sphere_embedding_from_pd_function(half, pts, 1e-10));
}

TEST_CASE("gaussian sphere embedding matches the closed form") {
    EmbeddingCoordinates pts;
    pts.labels = {"a", "b", "c"};
    pts.vectors.resize(3, 1);
    pts.vectors << 0.0, 1.0, 10.0;
    auto G = gaussian_gram(pts);
    CHECK(G.entries(0, 0) == doctest::Approx(1.0));
    CHECK(G.entries(0, 1) == doctest::Approx(std::exp(-1.0)));
    auto E = gaussian_sphere_embedding(pts, 1e-10);
    for (int i = 0; i < 3; ++i)
        CHECK(E.row(i).norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(E.dist2(0, 1) == doctest::Approx(2.0 * (1.0 - std::exp(-1.0))));
    CHECK(E.dist2(0, 2) == doctest::Approx(2.0).epsilon(1e-12));  // far pair saturates
    CHECK(E.dist(0, 0) == 0.0);
}

TEST_CASE("gaussian image distance is monotone and dominated by sqrt(2)d") {
    EmbeddingCoordinates pts;
    pts.labels.clear();
    std::vector<double> ds{0.1, 0.3, 0.7, 1.0, 1.5, 2.5, 4.0};
    double prev = 0.0;
    for (double d : ds) {
        double img2 = 2.0 * (1.0 - std::exp(-d * d));
        CHECK(img2 > prev);
        prev = img2;
        CHECK(std::sqrt(img2) <= std::sqrt(2.0) * d + 1e-12);
        CHECK(img2 < 2.0);
    }
}

TEST_CASE("EmbeddingCoordinates validate") {
    EmbeddingCoordinates e;
    e.labels = {"a", "b"};
    e.vectors.resize(2, 2);
    e.vectors << 1.0, 0.0, 0.0, 1.0;
    CHECK_NOTHROW(e.validate());
    e.labels.pop_back();
    CHECK_THROWS(e.validate());
}
