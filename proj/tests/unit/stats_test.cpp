#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "insightmap/stats.hpp"
#include "oracles.hpp"

using namespace insightmap;

TEST(Stats, NormalCdfAgainstBoost) {
    boost::math::normal normal;
    for (double z = -8.0; z <= 8.0; z += 0.137) {
        EXPECT_NEAR(stats::normal_cdf(z), boost::math::cdf(normal, z), 1e-7) << z;
    }
}

TEST(Stats, IncompleteBetaAgainstBoost) {
    for (double a : {0.5, 1.0, 2.5, 10.0, 40.0}) {
        for (double b : {0.5, 1.0, 3.0, 17.0}) {
            for (double x : {0.0, 0.01, 0.2, 0.5, 0.77, 0.99, 1.0}) {
                EXPECT_NEAR(stats::incomplete_beta(a, b, x), boost::math::ibeta(a, b, x), 1e-10)
                    << a << " " << b << " " << x;
            }
        }
    }
}

TEST(Stats, StudentPAgainstBoost) {
    for (double df : {1.0, 2.0, 4.5, 10.0, 38.0, 200.0}) {
        boost::math::students_t dist(df);
        for (double t : {0.0, 0.3, 1.0, 2.2, 5.0, 12.0}) {
            const double expected = 2.0 * boost::math::cdf(boost::math::complement(dist, t));
            EXPECT_NEAR(stats::student_t_two_sided_p(t, df), expected, 1e-8);
            EXPECT_NEAR(stats::student_t_two_sided_p(-t, df), expected, 1e-8);
        }
    }
    EXPECT_EQ(stats::student_t_two_sided_p(INFINITY, 3.0), 0.0);
}

TEST(Stats, PearsonAndFitAgainstOracle) {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> noise;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> xs, ys;
        for (int i = 0; i < 12; ++i) {
            xs.push_back(noise(rng));
            ys.push_back(0.5 * xs.back() + noise(rng));
        }
        EXPECT_NEAR(stats::pearson(xs, ys), oracle::pearson(xs, ys), 1e-12);
        const auto fit = stats::fit_against_rank(ys);
        const auto ref = oracle::regress_on_rank(ys);
        EXPECT_NEAR(fit.slope, ref.slope, 1e-12);
        EXPECT_NEAR(fit.intercept, ref.intercept, 1e-12);
        EXPECT_NEAR(fit.r, ref.r, 1e-12);
        EXPECT_NEAR(fit.p_value, ref.p_value, 1e-9);
    }
}

TEST(Stats, PearsonZeroVarianceIsZero) {
    const std::vector<double> xs{1, 2, 3, 4, 5};
    const std::vector<double> flat{2, 2, 2, 2, 2};
    EXPECT_EQ(stats::pearson(xs, flat), 0.0);
}

TEST(Stats, WelchAgainstOracle) {
    std::mt19937_64 rng(10);
    std::normal_distribution<double> noise;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> a, b;
        for (int i = 0; i < 3 + trial % 7; ++i) a.push_back(noise(rng));
        for (int i = 0; i < 2 + trial % 5; ++i) b.push_back(1.0 + 2.0 * noise(rng));
        const auto got = stats::welch_t_test(a, b);
        const auto ref = oracle::welch(a, b);
        EXPECT_NEAR(got.t, ref.t, 1e-9);
        EXPECT_NEAR(got.df, ref.df, 1e-9);
        EXPECT_NEAR(got.p_value, ref.p_value, 1e-9);
    }
}

TEST(Stats, WelchZeroVariance) {
    const std::vector<double> a{1, 1, 1};
    const std::vector<double> b{10, 10, 10};
    EXPECT_TRUE(std::isinf(stats::welch_t_test(a, b).t));
    EXPECT_EQ(stats::welch_t_test(a, b).p_value, 0.0);
    EXPECT_EQ(stats::welch_t_test(a, a).t, 0.0);
}

TEST(Stats, MedianAndVariance) {
    const std::vector<double> odd{3, 1, 2};
    const std::vector<double> even{4, 1, 3, 2};
    EXPECT_EQ(stats::median(odd), 2.0);
    EXPECT_EQ(stats::median(even), 2.5);
    EXPECT_DOUBLE_EQ(stats::sample_variance(even), 1.6666666666666667);
    const std::vector<double> one{5};
    EXPECT_EQ(stats::sample_variance(one), 0.0);
}
