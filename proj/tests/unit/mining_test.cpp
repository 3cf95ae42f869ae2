#include <gtest/gtest.h>

#include <random>
#include <set>

#include "fixtures.hpp"
#include "insightmap/insight.hpp"
#include "insightmap/mining.hpp"

using namespace insightmap;

namespace {

MiningOptions all_rows(std::size_t depth = 2) {
    MiningOptions options;
    options.enumeration = {depth, 1};
    return options;
}

std::size_t count_of(const MiningResult& result, InsightType type) {
    std::size_t n = 0;
    for (const auto& i : result.insights) n += i.type == type;
    return n;
}

}  // namespace

TEST(Impact, T4Examples) {
    const auto ds = fixtures::t4();
    const auto val = *ds.field_index("val");
    const RowSet red{0, 1};
    EXPECT_EQ(impact(ds, ds.all_rows(), val), 1.0);
    EXPECT_EQ(impact(ds, ds.all_rows(), std::nullopt), 1.0);
    EXPECT_EQ(impact(ds, red, std::nullopt), 0.5);
    EXPECT_DOUBLE_EQ(impact(ds, red, val), 0.3);
}

TEST(InsightId, DeterministicAndDistinct) {
    const SubspaceSpec s{{"color", "red"}};
    const auto a = insight_key(InsightType::Trend, s, "year", "val", "", Aggregation::sum);
    const auto b = insight_key(InsightType::Trend, s, "year", "val", "", Aggregation::average);
    EXPECT_EQ(insight_id(a), insight_id(a));
    EXPECT_NE(insight_id(a), insight_id(b));
    EXPECT_EQ(insight_id(a).size(), 17u);
    EXPECT_EQ(insight_id(a)[0], 'i');
    EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ull);
    EXPECT_EQ(to_hex(0xabcull), "0000000000000abc");
}

TEST(Mining, ScoresAreProducts) {
    std::mt19937_64 rng(21);
    const auto ds = fixtures::random_dataset({{3, 4, 5}, 2, 80}, rng);
    const auto result = mine_insights(ds, all_rows());
    ASSERT_FALSE(result.insights.empty());
    ASSERT_EQ(result.insights.size(), result.insight_subspace.size());
    std::set<std::string> ids;
    for (const auto& i : result.insights) {
        EXPECT_GE(i.significance, 0.0);
        EXPECT_LE(i.significance, 1.0);
        EXPECT_GE(i.impact, 0.0);
        EXPECT_LE(i.impact, 1.0);
        EXPECT_EQ(i.score, i.significance * i.impact);
        EXPECT_TRUE(ids.insert(i.id).second) << "duplicate id " << i.id;
    }
}

TEST(Mining, Deterministic) {
    std::mt19937_64 rng(22);
    const auto ds = fixtures::random_dataset({{3, 3}, 2, 60}, rng);
    EXPECT_EQ(mine_insights(ds, all_rows()).insights, mine_insights(ds, all_rows()).insights);
}

TEST(Mining, OrdinalOnlyDetectorsSkipCategorical) {
    std::mt19937_64 rng(23);
    const auto ds = fixtures::random_dataset({{6, 6}, 1, 200}, rng);
    const auto result = mine_insights(ds, all_rows());
    EXPECT_EQ(count_of(result, InsightType::Trend), 0u);
    EXPECT_EQ(count_of(result, InsightType::ChangePoint), 0u);
}

TEST(Mining, AttributionOnlyForSumAndCount) {
    const auto ds = ingest_csv(fixtures::league_csv(3), {{"year", FieldRole::dimension}});
    const auto result = mine_insights(ds, all_rows(1));
    ASSERT_GT(count_of(result, InsightType::Attribution), 0u);
    for (const auto& i : result.insights) {
        if (i.type == InsightType::Attribution) {
            EXPECT_TRUE(i.agg == Aggregation::sum || i.agg == Aggregation::count);
        }
    }
}

TEST(Mining, TrendOnRampingOrdinal) {
    std::string csv = "k,v\n";
    for (int k = 0; k < 8; ++k) csv += std::to_string(k) + "," + std::to_string(2.5 * k + 1.25) + "\n";
    const auto ds = ingest_csv(csv);
    const auto result = mine_insights(ds, all_rows(1));
    bool found = false;
    for (const auto& i : result.insights) {
        if (i.type == InsightType::Trend && i.agg == Aggregation::sum && i.subspace.empty()) {
            found = true;
            EXPECT_NEAR(std::get<TrendPayload>(i.payload).slope, 2.5, 1e-12);
            EXPECT_EQ(i.impact, 1.0);
        }
    }
    EXPECT_TRUE(found);
}

TEST(Mining, CrossMeasureCorrelationFires) {
    std::string csv = "g,a,b\n";
    for (int k = 0; k < 6; ++k) {
        csv += "g" + std::to_string(k) + "," + std::to_string(k + 0.5) + "," + std::to_string(3 * k + 0.25) + "\n";
    }
    const auto result = mine_insights(ingest_csv(csv), all_rows(1));
    bool found = false;
    for (const auto& i : result.insights) {
        if (i.type == InsightType::CrossMeasureCorrelation && i.agg == Aggregation::sum) {
            found = true;
            EXPECT_EQ(i.measure, "a");
            EXPECT_EQ(i.second_measure, "b");
            EXPECT_NEAR(std::get<CrossMeasurePayload>(i.payload).r, 1.0, 1e-12);
        }
    }
    EXPECT_TRUE(found);
}

TEST(Mining, SiblingCorrelationFires) {
    std::string csv = "shop,week,sales\n";
    for (int w = 0; w < 6; ++w) {
        const double base = (w * 7) % 5 + 0.5;
        csv += "A,w" + std::to_string(w) + "," + std::to_string(base) + "\n";
        csv += "B,w" + std::to_string(w) + "," + std::to_string(2 * base + 0.125) + "\n";
    }
    const auto result = mine_insights(ingest_csv(csv), all_rows(1));
    bool found = false;
    for (const auto& i : result.insights) {
        if (i.type != InsightType::Correlation || i.agg != Aggregation::sum) continue;
        found = true;
        EXPECT_EQ(i.subspace, (SubspaceSpec{{"shop", "A"}}));
        const auto& p = std::get<CorrelationPayload>(i.payload);
        EXPECT_EQ(p.other_subspace, (SubspaceSpec{{"shop", "B"}}));
        EXPECT_NEAR(p.r, 1.0, 1e-12);
        EXPECT_EQ(i.impact, 1.0);
    }
    EXPECT_TRUE(found);
}

TEST(Mining, ProgressReachesOne) {
    double last = -1.0;
    bool monotone = true;
    mine_insights(fixtures::t4(), all_rows(), [&](double f) {
        monotone = monotone && f >= last;
        last = f;
    });
    EXPECT_TRUE(monotone);
    EXPECT_EQ(last, 1.0);
}
