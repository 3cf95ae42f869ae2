#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "insightmap/dataset.hpp"
#include "insightmap/density.hpp"
#include "insightmap/detectors.hpp"
#include "insightmap/embedding.hpp"
#include "insightmap/insight.hpp"
#include "insightmap/mining.hpp"
#include "insightmap/point.hpp"

namespace insightmap {

inline constexpr std::string_view kSchemaVersion = "1.0";

/// Every mining and geometry parameter; stored verbatim in the catalog.
struct MiningConfig {
    std::size_t max_depth = 2;
    std::size_t min_rows = 5;
    std::vector<Aggregation> aggregations{Aggregation::sum, Aggregation::average, Aggregation::minimum,
                                          Aggregation::count, Aggregation::gradient};
    DetectorConfig detectors;
    ImpactMode impact = ImpactMode::measure;
    /// Insights with score <= keep_threshold are dropped.
    double keep_threshold = 0.0;

    ProjectionMethod projection = ProjectionMethod::tsne;
    EmbeddingKind embedding = EmbeddingKind::attribute_coverage;
    AttributeEmbeddingOptions attribute;
    double perplexity = 30.0;
    std::uint64_t seed = 42;
    std::size_t tsne_iterations = 1000;
    /// Only the top-scoring map_limit insights are embedded and projected.
    std::size_t map_limit = 1000;

    std::size_t grid_width = 64;
    std::size_t grid_height = 64;
    std::optional<double> bandwidth;
    std::vector<double> contour_levels{0.25, 0.5, 0.75};
    std::size_t distribution_bins = 10;

    /// Set by build_catalog: min_rows capped at max(1, N / 2) so tiny tables
    /// still yield filtered subspaces.
    std::size_t effective_min_rows = 0;

    bool operator==(const MiningConfig&) const = default;
};

struct DatasetSummary {
    std::string name;
    std::size_t row_count = 0;
    std::vector<FieldSchema> fields;
    std::vector<FieldDistribution> distributions;
    bool operator==(const DatasetSummary&) const = default;
};

struct SubspaceEntry {
    SubspaceSpec filters;
    std::size_t row_count = 0;
    std::size_t insight_count = 0;
    bool operator==(const SubspaceEntry&) const = default;
};

struct ProjectedPoint {
    std::string insight_id;
    double x = 0.0;
    double y = 0.0;
    bool operator==(const ProjectedPoint&) const = default;
};

struct Projection {
    ProjectionMethod method = ProjectionMethod::tsne;
    EmbeddingKind embedding = EmbeddingKind::attribute_coverage;
    std::uint64_t seed = 0;
    double perplexity = 0.0;  ///< value actually used (t-SNE only)
    std::size_t iterations = 0;
    std::vector<ProjectedPoint> points;
    bool operator==(const Projection&) const = default;
};

struct Catalog {
    std::string schema_version{kSchemaVersion};
    DatasetSummary dataset;
    std::vector<Insight> insights;  ///< score descending, then id ascending
    std::vector<SubspaceEntry> subspaces;  ///< insight count descending, then enumeration order
    std::optional<Projection> projection;
    std::optional<DensityField> density;
    MiningConfig config;

    const Insight* find(std::string_view id) const;
    bool operator==(const Catalog&) const = default;
};

/// Progress in [0, 1].
using BuildProgress = std::function<void(double)>;

/// enumerate -> detect -> embed -> project -> density. Deterministic for a
/// fixed config (including seed). With no surviving insights the catalog has
/// empty collections and neither projection nor density.
Catalog build_catalog(const Dataset& dataset, const MiningConfig& config = {}, const BuildProgress& progress = {});

struct InsightQuery {
    std::optional<std::set<InsightType>> types;
    std::optional<double> min_score;
    std::optional<double> min_significance;
    std::optional<double> min_impact;
    /// Per-field accepted values; "*" accepts subspaces leaving the field unfiltered.
    std::map<std::string, std::set<std::string>> brush;
    std::optional<std::string> breakdown_value;
    std::size_t offset = 0;
    std::optional<std::size_t> limit;

    bool operator==(const InsightQuery&) const = default;
};

inline constexpr std::string_view kNoRestriction = "*";

struct QueryResult {
    std::vector<Insight> insights;
    std::size_t total = 0;  ///< matches before offset/limit
};

/// Conjunction of all supplied criteria, in catalog order. Throws
/// CatalogError(UnknownField) for a brush on a field that is not a dimension.
QueryResult query_insights(const Catalog& catalog, const InsightQuery& query);

struct Relation {
    enum class Kind { same_breakdown_value, nearest };
    Kind kind = Kind::same_breakdown_value;
    std::size_t k = 5;
};

/// same_breakdown_value: other insights with the same breakdown field and
/// headline breakdown value. nearest: k nearest projected insights, ties by
/// id. Throws CatalogError(UnknownInsight) / CatalogError(NoProjection).
std::vector<std::string> related_insights(const Catalog& catalog, std::string_view insight_id, Relation relation);

/// One English sentence per insight from a fixed per-type template.
std::string describe_insight(const Insight& insight);

/// Renders a number with 4 significant digits.
std::string format_number(double value);

}  // namespace insightmap
