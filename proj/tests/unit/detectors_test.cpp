#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "insightmap/detectors.hpp"
#include "oracles.hpp"

using namespace insightmap;

namespace {

using Series = std::vector<double>;

Series noisy(std::mt19937_64& rng, std::size_t n, double sd = 1.0) {
    std::normal_distribution<double> noise(10.0, sd);
    Series out(n);
    for (auto& v : out) v = noise(rng);
    return out;
}

}  // namespace

TEST(TopOne, Examples) {
    const auto hit = detect_top_one(Series{100, 10, 9, 8});
    ASSERT_TRUE(hit);
    EXPECT_EQ(hit->leader, 0u);
    EXPECT_DOUBLE_EQ(hit->z, 91.0);
    EXPECT_GT(hit->significance, 0.99);
    EXPECT_FALSE(detect_top_one(Series{5, 5, 5, 5}));
    EXPECT_FALSE(detect_top_one(Series{10, 9.9, 9.8, 9.7}));
    EXPECT_FALSE(detect_top_one(Series{100, 1, 2}));  // below minimum length
}

TEST(TopOne, MatchesOracle) {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 100; ++trial) {
        auto xs = noisy(rng, 4 + trial % 9);
        xs[trial % xs.size()] += 8.0;
        std::size_t leader = 0;
        const double z = oracle::top_one_z(xs, &leader);
        const auto got = detect_top_one(xs);
        ASSERT_EQ(got.has_value(), z >= 3.0);
        if (got) {
            EXPECT_EQ(got->leader, leader);
            EXPECT_NEAR(got->z, z, 1e-9);
        }
    }
}

TEST(Attribution, Examples) {
    const auto hit = detect_attribution(Series{60, 20, 10, 10});
    ASSERT_TRUE(hit);
    EXPECT_EQ(hit->leader, 0u);
    EXPECT_DOUBLE_EQ(hit->shares[0], 0.6);
    EXPECT_FALSE(detect_attribution(Series{25, 25, 25, 25}));
    const auto tie = detect_attribution(Series{50, 50});
    ASSERT_TRUE(tie);
    EXPECT_EQ(tie->leader, 0u);
    EXPECT_DOUBLE_EQ(tie->shares[0], 0.5);
}

TEST(Attribution, RejectsNegativeOrZeroTotal) {
    EXPECT_FALSE(detect_attribution(Series{10, -1, 2}));
    EXPECT_FALSE(detect_attribution(Series{0, 0, 0}));
}

TEST(ChangePoint, Examples) {
    const auto hit = detect_change_point(Series{1, 1, 1, 1, 10, 10, 10, 10});
    ASSERT_TRUE(hit);
    EXPECT_EQ(hit->split, 4u);
    EXPECT_EQ(hit->mean_before, 1.0);
    EXPECT_EQ(hit->mean_after, 10.0);
    EXPECT_FALSE(detect_change_point(Series{1, 2, 3, 4, 5, 6}));
    EXPECT_FALSE(detect_change_point(Series{4, 4, 4, 4, 4, 4, 4}));
}

TEST(ChangePoint, RampExceedsThresholdAtEverySplit) {
    const Series ramp{1, 2, 3, 4, 5, 6};
    for (std::size_t s = 2; s + 2 <= ramp.size(); ++s) {
        const Series a(ramp.begin(), ramp.begin() + static_cast<long>(s));
        const Series b(ramp.begin() + static_cast<long>(s), ramp.end());
        EXPECT_GT(oracle::welch(a, b).p_value, 0.01) << s;
    }
}

TEST(ChangePoint, MatchesExhaustiveOracle) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        auto xs = noisy(rng, 6 + trial % 15);
        const std::size_t shift_at = 2 + trial % (xs.size() - 3);
        for (std::size_t i = shift_at; i < xs.size(); ++i) xs[i] += (trial % 3) * 2.0;
        const auto ref = oracle::best_split(xs);
        ASSERT_TRUE(ref);
        const auto got = detect_change_point(xs);
        ASSERT_EQ(got.has_value(), ref->test.p_value <= 0.01) << trial;
        if (got) {
            EXPECT_EQ(got->split, ref->split);
            EXPECT_NEAR(got->t, ref->test.t, 1e-9);
            EXPECT_NEAR(got->p_value, ref->test.p_value, 1e-9);
        }
    }
}

TEST(Outlier, Examples) {
    const auto hit = detect_outlier(Series{1, 2, 1, 2, 50, 1, 2});
    ASSERT_TRUE(hit);
    EXPECT_EQ(hit->strongest, 4u);
    EXPECT_EQ(hit->outliers, (std::vector<std::size_t>{4}));
    EXPECT_EQ(hit->median, 2.0);
    EXPECT_EQ(hit->mad, 1.0);
    EXPECT_NEAR(hit->max_z, 0.6745 * 48.0, 1e-12);
    EXPECT_NEAR(hit->max_z, 32.4, 0.05);
    EXPECT_FALSE(detect_outlier(Series{1, 2, 3, 4, 5}));
    const auto zero_mad = detect_outlier(Series{2, 2, 2, 2, 9});
    ASSERT_TRUE(zero_mad);
    EXPECT_TRUE(std::isinf(zero_mad->max_z));
    EXPECT_EQ(zero_mad->strongest, 4u);
}

TEST(Outlier, MaxRobustZOfRamp) {
    const auto z = robust_z_scores(Series{1, 2, 3, 4, 5});
    EXPECT_NEAR(*std::max_element(z.begin(), z.end()), 1.349, 1e-12);
}

TEST(Outlier, MatchesOracle) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        auto xs = noisy(rng, 5 + trial % 10);
        double med = 0, mad = 0;
        const auto ref = oracle::robust_z(xs, &med, &mad);
        double m2 = 0, mad2 = 0;
        const auto got = robust_z_scores(xs, &m2, &mad2);
        EXPECT_NEAR(m2, med, 1e-12);
        EXPECT_NEAR(mad2, mad, 1e-12);
        for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_NEAR(got[i], ref[i], 1e-9);
    }
}

TEST(Trend, Examples) {
    const auto hit = detect_trend(Series{1, 2, 3, 4, 5});
    ASSERT_TRUE(hit);
    EXPECT_NEAR(hit->slope, 1.0, 1e-15);
    EXPECT_NEAR(hit->r, 1.0, 1e-15);
    EXPECT_TRUE(hit->increasing);
    EXPECT_FALSE(detect_trend(Series{3, 3, 3, 3, 3}));
    EXPECT_FALSE(detect_trend(Series{1, 5, 2, 4, 3}));
    EXPECT_LT(std::fabs(oracle::pearson({0, 1, 2, 3, 4}, {1, 5, 2, 4, 3})), 0.7);
    const auto down = detect_trend(Series{9, 7, 5, 3, 1});
    ASSERT_TRUE(down);
    EXPECT_FALSE(down->increasing);
}

TEST(Trend, MatchesRegressionOracle) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        auto xs = noisy(rng, 5 + trial % 12);
        for (std::size_t i = 0; i < xs.size(); ++i) xs[i] += 0.3 * (trial % 4) * static_cast<double>(i);
        const auto ref = oracle::regress_on_rank(xs);
        const auto got = detect_trend(xs);
        ASSERT_EQ(got.has_value(), std::fabs(ref.r) >= 0.7 && ref.p_value <= 0.05);
        if (got) {
            EXPECT_NEAR(got->slope, ref.slope, 1e-9);
            EXPECT_NEAR(got->intercept, ref.intercept, 1e-9);
            EXPECT_NEAR(got->r, ref.r, 1e-9);
            EXPECT_NEAR(got->p_value, ref.p_value, 1e-9);
        }
    }
}

TEST(Correlation, Examples) {
    const Series a{1, 2, 3, 4, 5};
    const auto pos = detect_correlation(a, Series{2, 4, 6, 8, 10});
    ASSERT_TRUE(pos);
    EXPECT_NEAR(pos->r, 1.0, 1e-15);
    const auto neg = detect_correlation(a, Series{10, 8, 6, 4, 2});
    ASSERT_TRUE(neg);
    EXPECT_NEAR(neg->r, -1.0, 1e-15);
    EXPECT_FALSE(detect_correlation(a, Series{1, -1, 1, -1, 1}));
}

TEST(CrossMeasure, Examples) {
    const Series a{1, 2, 3, 4, 5};
    const auto hit = detect_correlation(a, Series{3, 6, 9, 12, 15});
    ASSERT_TRUE(hit);
    EXPECT_NEAR(hit->r, 1.0, 1e-15);
    EXPECT_FALSE(detect_correlation(a, Series{4, 4, 4, 4, 4}));
    const auto neg = detect_correlation(a, Series{5, 4, 3, 2, 1});
    ASSERT_TRUE(neg);
    EXPECT_NEAR(neg->r, -1.0, 1e-15);
}

TEST(Correlation, MatchesOracle) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = noisy(rng, 5 + trial % 10);
        auto b = noisy(rng, a.size());
        for (std::size_t i = 0; i < a.size(); ++i) b[i] += (trial % 3) * a[i];
        const double r = oracle::pearson(a, b);
        const auto got = detect_correlation(a, b);
        ASSERT_EQ(got.has_value(), std::fabs(r) >= 0.8);
        if (got) EXPECT_NEAR(got->r, r, 1e-9);
    }
}

TEST(Clustering, Examples) {
    const auto hit = detect_clustering(Series{0.9, 1.0, 1.1, 9.8, 10.0, 10.2});
    ASSERT_TRUE(hit);
    EXPECT_NEAR(hit->gap, 8.7, 1e-12);
    EXPECT_NEAR(hit->mean_other_gaps, 0.15, 1e-12);
    EXPECT_EQ(hit->low, (std::vector<std::size_t>{0, 1, 2}));
    EXPECT_EQ(hit->high, (std::vector<std::size_t>{3, 4, 5}));
    EXPECT_FALSE(detect_clustering(Series{1, 2, 3, 4, 5, 6}));
    EXPECT_FALSE(detect_clustering(Series{1, 10, 11, 12}));
}

TEST(Clustering, MatchesOracle) {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 100; ++trial) {
        auto xs = noisy(rng, 4 + trial % 10);
        for (std::size_t i = 0; i < xs.size(); i += 2) xs[i] += (trial % 3) * 4.0;
        const auto ref = oracle::largest_gap(xs);
        const auto got = detect_clustering(xs);
        const bool big_enough = ref.low_count >= 2 && xs.size() - ref.low_count >= 2;
        const bool fires = big_enough && ref.mean_other > 0.0 && ref.gap >= 3.0 * ref.mean_other;
        ASSERT_EQ(got.has_value(), fires) << trial;
        if (got) {
            EXPECT_NEAR(got->gap, ref.gap, 1e-9);
            EXPECT_NEAR(got->mean_other_gaps, ref.mean_other, 1e-9);
            EXPECT_EQ(got->low.size(), ref.low_count);
        }
    }
}

TEST(Detectors, ScaleCovariance) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        auto xs = noisy(rng, 8);
        xs[trial % 8] += (trial % 2) * 6.0;
        auto scaled = xs;
        for (auto& v : scaled) v *= 37.5;
        EXPECT_EQ(detect_top_one(xs).has_value(), detect_top_one(scaled).has_value());
        EXPECT_EQ(detect_attribution(xs).has_value(), detect_attribution(scaled).has_value());
        EXPECT_EQ(detect_change_point(xs).has_value(), detect_change_point(scaled).has_value());
        EXPECT_EQ(detect_outlier(xs).has_value(), detect_outlier(scaled).has_value());
        EXPECT_EQ(detect_trend(xs).has_value(), detect_trend(scaled).has_value());
        EXPECT_EQ(detect_clustering(xs).has_value(), detect_clustering(scaled).has_value());
    }
}

TEST(Detectors, OrderFreeUnderPermutation) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        auto xs = noisy(rng, 7);
        xs[trial % 7] += (trial % 2) * 6.0;
        auto perm = xs;
        std::shuffle(perm.begin(), perm.end(), rng);
        EXPECT_EQ(detect_top_one(xs).has_value(), detect_top_one(perm).has_value());
        EXPECT_EQ(detect_attribution(xs).has_value(), detect_attribution(perm).has_value());
        EXPECT_EQ(detect_outlier(xs).has_value(), detect_outlier(perm).has_value());
        EXPECT_EQ(detect_clustering(xs).has_value(), detect_clustering(perm).has_value());
    }
}

TEST(Detectors, SignificanceInUnitInterval) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        auto xs = noisy(rng, 10);
        xs[3] += 20.0;
        for (std::size_t i = 5; i < 10; ++i) xs[i] += 10.0;
        auto check = [](const auto& r) {
            if (r) {
                EXPECT_GE(r->significance, 0.0);
                EXPECT_LE(r->significance, 1.0);
            }
        };
        check(detect_top_one(xs));
        check(detect_attribution(xs));
        check(detect_change_point(xs));
        check(detect_outlier(xs));
        check(detect_trend(xs));
        check(detect_clustering(xs));
    }
}
