#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "insightmap/dataset.hpp"

namespace insightmap {

enum class InsightType {
    TopOne,
    Attribution,
    ChangePoint,
    Outlier,
    Trend,
    Correlation,
    CrossMeasureCorrelation,
    Clustering,
};

inline constexpr std::array<InsightType, 8> kAllInsightTypes{
    InsightType::TopOne,  InsightType::Attribution, InsightType::ChangePoint,
    InsightType::Outlier, InsightType::Trend,       InsightType::Correlation,
    InsightType::CrossMeasureCorrelation,           InsightType::Clustering,
};

std::string_view to_string(InsightType type);
std::optional<InsightType> parse_insight_type(std::string_view text);

/// Name-based filter, detached from any Dataset instance.
struct FilterSpec {
    std::string field;
    std::string value;
    bool operator==(const FilterSpec&) const = default;
    auto operator<=>(const FilterSpec&) const = default;
};
using SubspaceSpec = std::vector<FilterSpec>;

/// "field=value & field=value", or "*" for the unrestricted subspace.
std::string to_string(const SubspaceSpec& subspace);

struct LabeledValue {
    std::string label;
    double value = 0.0;
    bool operator==(const LabeledValue&) const = default;
};
using LabeledSeries = std::vector<LabeledValue>;

struct TopOnePayload {
    std::string leader;
    double z = 0.0;
    LabeledSeries series;
    bool operator==(const TopOnePayload&) const = default;
};

struct AttributionPayload {
    std::string leader;
    double share = 0.0;
    LabeledSeries shares;
    LabeledSeries series;
    bool operator==(const AttributionPayload&) const = default;
};

struct ChangePointPayload {
    std::size_t split = 0;
    std::string split_value;
    double mean_before = 0.0;
    double mean_after = 0.0;
    double t = 0.0;
    double p_value = 1.0;
    LabeledSeries series;
    bool operator==(const ChangePointPayload&) const = default;
};

struct OutlierPayload {
    std::vector<std::string> outliers;
    std::string strongest;
    double max_z = 0.0;
    double median = 0.0;
    double mad = 0.0;
    LabeledSeries series;
    bool operator==(const OutlierPayload&) const = default;
};

struct TrendPayload {
    double slope = 0.0;
    double intercept = 0.0;
    double r = 0.0;
    double p_value = 1.0;
    bool increasing = true;
    LabeledSeries series;
    bool operator==(const TrendPayload&) const = default;
};

struct CorrelationPayload {
    double r = 0.0;
    SubspaceSpec other_subspace;
    LabeledSeries series_a;
    LabeledSeries series_b;
    bool operator==(const CorrelationPayload&) const = default;
};

struct CrossMeasurePayload {
    double r = 0.0;
    std::string measure_a;
    std::string measure_b;
    LabeledSeries series_a;
    LabeledSeries series_b;
    bool operator==(const CrossMeasurePayload&) const = default;
};

struct ClusteringPayload {
    double gap = 0.0;
    double mean_other_gaps = 0.0;
    std::vector<std::string> low;
    std::vector<std::string> high;
    LabeledSeries series;
    bool operator==(const ClusteringPayload&) const = default;
};

using InsightPayload = std::variant<TopOnePayload, AttributionPayload, ChangePointPayload, OutlierPayload,
                                    TrendPayload, CorrelationPayload, CrossMeasurePayload, ClusteringPayload>;

/// A typed, scored pattern: {type, subspace, breakdown, measure, score} plus
/// the statistics behind it. score = significance * impact.
struct Insight {
    std::string id;
    InsightType type = InsightType::TopOne;
    SubspaceSpec subspace;
    std::string breakdown;
    std::string measure;         ///< empty for count
    std::string second_measure;  ///< CrossMeasureCorrelation only
    Aggregation agg = Aggregation::sum;
    double significance = 0.0;
    double impact = 0.0;
    double score = 0.0;
    /// Headline breakdown value (leader, split value, strongest outlier).
    std::optional<std::string> breakdown_value;
    InsightPayload payload;

    bool operator==(const Insight&) const = default;
};

/// Canonical text key of an insight context; the id is a hash of it.
std::string insight_key(InsightType type, const SubspaceSpec& subspace, std::string_view breakdown,
                        std::string_view measure, std::string_view second_measure, Aggregation agg,
                        const SubspaceSpec& other_subspace = {});

/// "i" followed by 16 hex digits of the 64-bit FNV-1a hash of the key.
std::string insight_id(std::string_view key);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);
std::string to_hex(std::uint64_t value);

/// Share of the dataset covered by the rows: measure mass when a measure is
/// given (sum of absolute values), row share otherwise. Zero denominator
/// yields 0.
double impact(const Dataset& dataset, std::span<const std::uint32_t> rows, std::optional<std::size_t> measure);

}  // namespace insightmap
