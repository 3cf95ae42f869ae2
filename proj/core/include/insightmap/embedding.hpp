#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "insightmap/dataset.hpp"

namespace insightmap {

enum class EmbeddingKind { instance_coverage, attribute_coverage };

std::string_view to_string(EmbeddingKind kind);
std::optional<EmbeddingKind> parse_embedding_kind(std::string_view text);

/// Insight embedding vector.
///  - instance coverage: v[j] = 1 if row j is in the insight's subspace, else 0.
///  - attribute coverage: v[a,k] = |{r in subspace : r^a = y^{a,k}}| / N.
struct InsightEmbedding {
    std::string insight_id;
    EmbeddingKind kind = EmbeddingKind::attribute_coverage;
    std::vector<double> values;
};

struct AttributeEmbeddingOptions {
    /// Divide by |rowSet| instead of N.
    bool normalize_by_rows = false;
    /// When > 0, measures contribute this many equi-width bins each.
    std::size_t measure_bins = 0;
    bool operator==(const AttributeEmbeddingOptions&) const = default;
};

/// Meaning of one attribute-coverage position: a dimension value, or a
/// measure bin [lower, upper) (last bin right-inclusive).
struct AttributeComponent {
    std::size_t field = 0;
    std::int32_t value = 0;  ///< domain code, or bin index for measures
    bool measure_bin = false;
    double lower = 0.0;
    double upper = 0.0;
};

/// Position layout: schema order, then domain (or bin) order.
std::vector<AttributeComponent> attribute_components(const Dataset& dataset,
                                                     const AttributeEmbeddingOptions& options = {});

InsightEmbedding instance_embedding(const Dataset& dataset, std::span<const std::uint32_t> rows);
InsightEmbedding attribute_embedding(const Dataset& dataset, std::span<const std::uint32_t> rows,
                                     const AttributeEmbeddingOptions& options = {});

/// Symmetric Euclidean distance matrix with an exact zero diagonal.
/// Throws GeometryError(MixedKinds / LengthMismatch).
Eigen::MatrixXd pairwise_distance(std::span<const InsightEmbedding> embeddings);

/// Stacks embeddings as rows of an M x D matrix (same checks as pairwise_distance).
Eigen::MatrixXd embedding_matrix(std::span<const InsightEmbedding> embeddings);

/// Squared Euclidean distances between the rows of a point matrix.
Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& points);

}  // namespace insightmap
