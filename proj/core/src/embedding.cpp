#include "insightmap/embedding.hpp"

#include <algorithm>
#include <cmath>

#include "insightmap/errors.hpp"

namespace insightmap {

std::string_view to_string(EmbeddingKind kind) {
    return kind == EmbeddingKind::instance_coverage ? "instance" : "attribute";
}

std::optional<EmbeddingKind> parse_embedding_kind(std::string_view text) {
    if (text == "instance") return EmbeddingKind::instance_coverage;
    if (text == "attribute") return EmbeddingKind::attribute_coverage;
    return std::nullopt;
}

std::vector<AttributeComponent> attribute_components(const Dataset& dataset, const AttributeEmbeddingOptions& options) {
    std::vector<AttributeComponent> out;
    for (std::size_t f = 0; f < dataset.field_count(); ++f) {
        const auto& schema = dataset.field(f);
        if (schema.is_dimension()) {
            for (std::size_t k = 0; k < schema.cardinality(); ++k) {
                out.push_back({f, static_cast<std::int32_t>(k), false, 0.0, 0.0});
            }
        } else if (options.measure_bins > 0) {
            const double width = (schema.max - schema.min) / static_cast<double>(options.measure_bins);
            for (std::size_t b = 0; b < options.measure_bins; ++b) {
                const double lower = schema.min + width * static_cast<double>(b);
                const double upper = b + 1 == options.measure_bins ? schema.max : lower + width;
                out.push_back({f, static_cast<std::int32_t>(b), true, lower, upper});
            }
        }
    }
    return out;
}

InsightEmbedding instance_embedding(const Dataset& dataset, std::span<const std::uint32_t> rows) {
    InsightEmbedding e;
    e.kind = EmbeddingKind::instance_coverage;
    e.values.assign(dataset.row_count(), 0.0);
    for (auto r : rows) {
        e.values[r] = 1.0;
    }
    return e;
}

namespace {

std::size_t measure_bin(double v, double lo, double hi, std::size_t bins) {
    if (!(hi > lo)) return 0;
    const auto index = static_cast<std::size_t>(std::floor((v - lo) / (hi - lo) * static_cast<double>(bins)));
    return std::min(index, bins - 1);
}

}  // namespace

InsightEmbedding attribute_embedding(const Dataset& dataset, std::span<const std::uint32_t> rows,
                                     const AttributeEmbeddingOptions& options) {
    InsightEmbedding e;
    e.kind = EmbeddingKind::attribute_coverage;
    const double denominator =
        options.normalize_by_rows ? static_cast<double>(rows.size()) : static_cast<double>(dataset.row_count());

    for (std::size_t f = 0; f < dataset.field_count(); ++f) {
        const auto& schema = dataset.field(f);
        std::vector<std::size_t> counts;
        if (schema.is_dimension()) {
            counts.assign(schema.cardinality(), 0);
            const auto codes = dataset.codes(f);
            for (auto r : rows) {
                if (codes[r] != Dataset::kMissingCode) ++counts[static_cast<std::size_t>(codes[r])];
            }
        } else if (options.measure_bins > 0) {
            counts.assign(options.measure_bins, 0);
            const auto values = dataset.values(f);
            for (auto r : rows) {
                if (!std::isnan(values[r])) {
                    ++counts[measure_bin(values[r], schema.min, schema.max, options.measure_bins)];
                }
            }
        }
        for (auto c : counts) {
            e.values.push_back(denominator > 0.0 ? static_cast<double>(c) / denominator : 0.0);
        }
    }
    return e;
}

Eigen::MatrixXd embedding_matrix(std::span<const InsightEmbedding> embeddings) {
    if (embeddings.empty()) return Eigen::MatrixXd(0, 0);
    const auto kind = embeddings.front().kind;
    const auto dim = embeddings.front().values.size();
    for (const auto& e : embeddings) {
        if (e.kind != kind) {
            throw GeometryError(GeometryErrc::MixedKinds, "embeddings of different kinds cannot be compared");
        }
        if (e.values.size() != dim) {
            throw GeometryError(GeometryErrc::LengthMismatch, "embeddings have different lengths");
        }
    }
    Eigen::MatrixXd m(static_cast<Eigen::Index>(embeddings.size()), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < embeddings.size(); ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = embeddings[i].values[j];
        }
    }
    return m;
}

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& points) {
    const Eigen::Index m = points.rows();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = i + 1; j < m; ++j) {
            const double s = (points.row(i) - points.row(j)).squaredNorm();
            d(i, j) = s;
            d(j, i) = s;
        }
    }
    return d;
}

Eigen::MatrixXd pairwise_distance(std::span<const InsightEmbedding> embeddings) {
    Eigen::MatrixXd d = squared_distances(embedding_matrix(embeddings));
    return d.cwiseSqrt();
}

}  // namespace insightmap
