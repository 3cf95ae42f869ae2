#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "insightmap/embedding.hpp"
#include "insightmap/errors.hpp"
#include "insightmap/mds.hpp"
#include "insightmap/subspace.hpp"
#include "insightmap/tsne.hpp"
#include "oracles.hpp"

using namespace insightmap;

namespace {

RowSet rows_of(const Dataset& ds, std::vector<Filter> filters) { return make_subspace(ds, std::move(filters)).rows; }

Eigen::MatrixXd distances_of(const std::vector<Point2>& pts) {
    const auto m = static_cast<Eigen::Index>(pts.size());
    Eigen::MatrixXd d(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            d(i, j) = oracle::distance(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]);
    return d;
}

std::vector<Point2> random_points(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    std::vector<Point2> out(n);
    for (auto& p : out) p = {u(rng), u(rng)};
    return out;
}

Eigen::MatrixXd blobs(std::mt19937_64& rng, std::size_t per_blob, std::size_t dims, double offset) {
    std::normal_distribution<double> noise;
    Eigen::MatrixXd x(static_cast<Eigen::Index>(2 * per_blob), static_cast<Eigen::Index>(dims));
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j)
            x(i, j) = noise(rng) + (i >= static_cast<Eigen::Index>(per_blob) ? offset : 0.0);
    return x;
}

}  // namespace

TEST(InstanceEmbedding, T4Vectors) {
    const auto ds = fixtures::t4();
    // color domain [blue, red], size domain [L, S]
    EXPECT_EQ(instance_embedding(ds, ds.all_rows()).values, (std::vector<double>{1, 1, 1, 1}));
    EXPECT_EQ(instance_embedding(ds, rows_of(ds, {{0, 1}})).values, (std::vector<double>{1, 1, 0, 0}));
    EXPECT_EQ(instance_embedding(ds, rows_of(ds, {{0, 1}, {1, 0}})).values, (std::vector<double>{0, 1, 0, 0}));
    EXPECT_EQ(instance_embedding(ds, ds.all_rows()).kind, EmbeddingKind::instance_coverage);
}

TEST(AttributeEmbedding, T4Vectors) {
    const auto ds = fixtures::t4();
    EXPECT_EQ(attribute_embedding(ds, rows_of(ds, {{0, 1}})).values, (std::vector<double>{0, 0.5, 0.25, 0.25}));
    EXPECT_EQ(attribute_embedding(ds, ds.all_rows()).values, (std::vector<double>{0.5, 0.5, 0.5, 0.5}));
    EXPECT_EQ(attribute_embedding(ds, RowSet{}).values, (std::vector<double>{0, 0, 0, 0}));
    const auto components = attribute_components(ds);
    ASSERT_EQ(components.size(), 4u);
    EXPECT_EQ(components[1].field, 0u);
    EXPECT_EQ(components[1].value, 1);
    EXPECT_EQ(components[2].field, 1u);
}

TEST(AttributeEmbedding, NormalizeByRowsOption) {
    const auto ds = fixtures::t4();
    AttributeEmbeddingOptions options;
    options.normalize_by_rows = true;
    EXPECT_EQ(attribute_embedding(ds, rows_of(ds, {{0, 1}}), options).values,
              (std::vector<double>{0, 1.0, 0.5, 0.5}));
}

TEST(AttributeEmbedding, MeasureBinsOption) {
    const auto ds = fixtures::t4();
    AttributeEmbeddingOptions options;
    options.measure_bins = 8;
    const auto v = attribute_embedding(ds, ds.all_rows(), options).values;
    ASSERT_EQ(v.size(), 12u);
    double measure_mass = 0.0;
    for (std::size_t i = 4; i < v.size(); ++i) measure_mass += v[i];
    EXPECT_NEAR(measure_mass, 1.0, 1e-15);
    EXPECT_EQ(v.back(), 0.25);  // the maximum lands in the right-inclusive last bin
}

TEST(AttributeEmbedding, PerDimensionSumsEqualCoverage) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const auto ds = fixtures::random_dataset({{2, 3, 4}, 1, 30}, rng);
        for (const auto& s : enumerate_subspaces(ds, {2, 0})) {
            const auto v = attribute_embedding(ds, s.rows).values;
            const auto components = attribute_components(ds);
            std::vector<double> sums(ds.field_count(), 0.0);
            for (std::size_t k = 0; k < v.size(); ++k) sums[components[k].field] += v[k];
            for (auto f : ds.dimension_indices()) {
                EXPECT_NEAR(sums[f], static_cast<double>(s.rows.size()) / 30.0, 1e-12);
            }
            const auto inst = instance_embedding(ds, s.rows).values;
            double ones = 0.0;
            for (double x : inst) ones += x;
            EXPECT_EQ(ones, static_cast<double>(s.rows.size()));
        }
    }
}

TEST(PairwiseDistance, T4RedBlueIsTwo) {
    const auto ds = fixtures::t4();
    const std::vector<InsightEmbedding> e{instance_embedding(ds, rows_of(ds, {{0, 1}})),
                                          instance_embedding(ds, rows_of(ds, {{0, 0}}))};
    const auto d = pairwise_distance(e);
    EXPECT_EQ(d(0, 1), 2.0);
    EXPECT_EQ(d(1, 0), 2.0);
    EXPECT_EQ(d(0, 0), 0.0);
}

TEST(PairwiseDistance, MetricProperties) {
    std::mt19937_64 rng(32);
    std::normal_distribution<double> noise;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<InsightEmbedding> e(12);
        for (auto& x : e) {
            x.values.resize(7);
            for (auto& v : x.values) v = noise(rng);
        }
        const auto d = pairwise_distance(e);
        for (Eigen::Index i = 0; i < d.rows(); ++i) {
            EXPECT_EQ(d(i, i), 0.0);
            for (Eigen::Index j = 0; j < d.cols(); ++j) {
                EXPECT_EQ(d(i, j), d(j, i));
                for (Eigen::Index k = 0; k < d.cols(); ++k) EXPECT_LE(d(i, k), d(i, j) + d(j, k) + 1e-9);
            }
        }
    }
}

TEST(PairwiseDistance, RejectsMixedKindsAndLengths) {
    const auto ds = fixtures::t4();
    std::vector<InsightEmbedding> mixed{instance_embedding(ds, ds.all_rows()), attribute_embedding(ds, ds.all_rows())};
    try {
        pairwise_distance(mixed);
        FAIL();
    } catch (const GeometryError& e) {
        EXPECT_EQ(e.code(), GeometryErrc::MixedKinds);
    }
    mixed[1] = instance_embedding(ds, ds.all_rows());
    mixed[1].values.pop_back();
    try {
        pairwise_distance(mixed);
        FAIL();
    } catch (const GeometryError& e) {
        EXPECT_EQ(e.code(), GeometryErrc::LengthMismatch);
    }
}

TEST(PairwiseDistance, NestedSubspacesGrowNorm) {
    const auto ds = fixtures::t4();
    const auto outer = instance_embedding(ds, rows_of(ds, {{0, 1}})).values;
    const auto inner = instance_embedding(ds, rows_of(ds, {{0, 1}, {1, 1}})).values;
    double a = 0, b = 0;
    for (double v : outer) a += v * v;
    for (double v : inner) b += v * v;
    EXPECT_GE(a, b);
}

TEST(Mds, RightTriangle) {
    Eigen::MatrixXd d(3, 3);
    d << 0, 3, 5, 3, 0, 4, 5, 4, 0;
    const auto out = distances_of(project_mds(d));
    EXPECT_LE((out - d).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Mds, AllEqualPointsCollapse) {
    const auto pts = project_mds(Eigen::MatrixXd::Zero(5, 5));
    for (const auto& p : pts) {
        EXPECT_EQ(p.x, 0.0);
        EXPECT_EQ(p.y, 0.0);
    }
}

TEST(Mds, RecoversPlanarConfigurations) {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 10; ++trial) {
        const auto truth = distances_of(random_points(rng, 3 + trial * 4));
        const auto got = distances_of(project_mds(truth));
        EXPECT_LE((got - truth).cwiseAbs().maxCoeff(), 1e-6);
    }
}

TEST(Mds, RejectsBadInput) {
    Eigen::MatrixXd asym(3, 3);
    asym << 0, 1, 2, 1.5, 0, 1, 2, 1, 0;
    EXPECT_THROW(project_mds(asym), GeometryError);
    EXPECT_THROW(project_mds(Eigen::MatrixXd::Zero(2, 2)), GeometryError);
}

TEST(Tsne, DeterministicForSeed) {
    std::mt19937_64 rng(34);
    const Eigen::MatrixXd x = Eigen::MatrixXd::NullaryExpr(10, 5, [&] { return std::normal_distribution<>()(rng); });
    TsneParams params;
    params.perplexity = 3.0;
    params.iterations = 300;
    const auto a = project_tsne(x, params);
    const auto b = project_tsne(x, params);
    EXPECT_EQ(a.coords, b.coords);
    params.seed = 43;
    EXPECT_NE(project_tsne(x, params).coords, a.coords);
}

TEST(Tsne, JointProbabilitiesProperties) {
    std::mt19937_64 rng(35);
    const auto x = blobs(rng, 15, 4, 3.0);
    const auto sq = squared_distances(x);
    const auto p = joint_probabilities(sq, 8.0);
    EXPECT_NEAR(p.sum(), 1.0, 1e-9);
    EXPECT_GE(p.minCoeff(), 0.0);
    EXPECT_LE((p - p.transpose()).cwiseAbs().maxCoeff(), 0.0);
    for (Eigen::Index i = 0; i < p.rows(); ++i) EXPECT_EQ(p(i, i), 0.0);
}

TEST(Tsne, RowsHitTargetPerplexity) {
    std::mt19937_64 rng(36);
    const auto x = blobs(rng, 20, 5, 4.0);
    const auto cond = conditional_affinities(squared_distances(x), 10.0);
    for (Eigen::Index i = 0; i < cond.p.rows(); ++i) {
        std::vector<double> row(static_cast<std::size_t>(cond.p.cols()));
        for (Eigen::Index j = 0; j < cond.p.cols(); ++j) row[static_cast<std::size_t>(j)] = cond.p(i, j);
        EXPECT_NEAR(oracle::row_perplexity(row, static_cast<std::size_t>(i)), 10.0, 1e-3);
        EXPECT_NEAR(cond.p.row(i).sum(), 1.0, 1e-12);
    }
}

TEST(Tsne, SeparatesTwoBlobs) {
    std::mt19937_64 rng(37);
    const auto x = blobs(rng, 20, 10, 20.0);
    TsneParams params;
    params.perplexity = 10.0;
    const auto coords = project_tsne(x, params).coords;
    double inter = 0.0, intra = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < 40; ++i) {
        for (std::size_t j = i + 1; j < 40; ++j) {
            const double d = oracle::distance(coords[i], coords[j]);
            if ((i < 20) == (j < 20)) {
                intra = std::max(intra, d);
            } else {
                inter += d;
                ++pairs;
            }
        }
    }
    EXPECT_GT(inter / static_cast<double>(pairs), intra);
}

TEST(Tsne, KlDecreases) {
    std::mt19937_64 rng(38);
    const auto x = blobs(rng, 12, 6, 5.0);
    TsneParams params;
    params.perplexity = 5.0;
    const auto r = project_tsne(x, params);
    EXPECT_TRUE(std::isfinite(r.kl_after_exaggeration));
    EXPECT_LT(r.kl_final, r.kl_initial);
    EXPECT_NEAR(r.kl_final, kl_divergence(joint_probabilities(squared_distances(x), 5.0), r.coords), 1e-12);
}

TEST(Tsne, PointAndDistancePathsAgree) {
    std::mt19937_64 rng(39);
    const auto x = blobs(rng, 8, 3, 2.0);
    TsneParams params;
    params.perplexity = 4.0;
    params.iterations = 400;
    const auto a = project_tsne(x, params).coords;
    const auto b = project_tsne_squared(squared_distances(x), params).coords;
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_NEAR(a[i].x, b[i].x, 1e-12);
        EXPECT_NEAR(a[i].y, b[i].y, 1e-12);
    }
}

TEST(Tsne, RejectsTooFewPointsAndLargePerplexity) {
    TsneParams params;
    params.perplexity = 1.0;
    try {
        project_tsne(Eigen::MatrixXd::Random(3, 2), params);
        FAIL();
    } catch (const GeometryError& e) {
        EXPECT_EQ(e.code(), GeometryErrc::TooFewPoints);
    }
    params.perplexity = 30.0;
    try {
        project_tsne(Eigen::MatrixXd::Random(10, 2), params);
        FAIL();
    } catch (const GeometryError& e) {
        EXPECT_EQ(e.code(), GeometryErrc::PerplexityTooLarge);
    }
    EXPECT_DOUBLE_EQ(max_perplexity(10), 3.0);
}

TEST(GaussianStream, Reproducible) {
    GaussianStream a(5), b(5);
    for (int i = 0; i < 10; ++i) EXPECT_EQ(a.next(), b.next());
}
