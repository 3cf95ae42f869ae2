#include "insightmap/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "insightmap/errors.hpp"
#include "insightmap/mds.hpp"
#include "insightmap/tsne.hpp"

namespace insightmap {

const Insight* Catalog::find(std::string_view id) const {
    for (const auto& insight : insights) {
        if (insight.id == id) return &insight;
    }
    return nullptr;
}

namespace {

std::size_t intersection_size(const RowSet& a, const RowSet& b) {
    std::size_t n = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++n;
            ++i;
            ++j;
        }
    }
    return n;
}

/// Squared distances between the embeddings of the given subspaces.
Eigen::MatrixXd subspace_squared_distances(const Dataset& dataset, const std::vector<const Subspace*>& subspaces,
                                           const MiningConfig& config) {
    const auto m = static_cast<Eigen::Index>(subspaces.size());
    if (config.embedding == EmbeddingKind::instance_coverage) {
        // |A| + |B| - 2|A n B| is exact for binary vectors and avoids N-length rows.
        Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m, m);
        for (Eigen::Index i = 0; i < m; ++i) {
            for (Eigen::Index j = i + 1; j < m; ++j) {
                const auto& a = subspaces[static_cast<std::size_t>(i)]->rows;
                const auto& b = subspaces[static_cast<std::size_t>(j)]->rows;
                const double s = static_cast<double>(a.size() + b.size() - 2 * intersection_size(a, b));
                d(i, j) = s;
                d(j, i) = s;
            }
        }
        return d;
    }
    std::vector<InsightEmbedding> embeddings;
    embeddings.reserve(subspaces.size());
    for (const auto* s : subspaces) {
        embeddings.push_back(attribute_embedding(dataset, s->rows, config.attribute));
    }
    return squared_distances(embedding_matrix(embeddings));
}

std::vector<Point2> layout_points(const Eigen::MatrixXd& squared, const MiningConfig& config, Projection& projection) {
    const auto m = static_cast<std::size_t>(squared.rows());
    projection.seed = config.seed;
    if (m == 1) {
        return {Point2{}};
    }
    if (m == 2) {
        const double half = 0.5 * std::sqrt(squared(0, 1));
        return {Point2{-half, 0.0}, Point2{half, 0.0}};
    }
    if (config.projection == ProjectionMethod::tsne && m >= 4) {
        TsneParams params;
        params.perplexity = std::min(config.perplexity, max_perplexity(m));
        params.seed = config.seed;
        params.iterations = config.tsne_iterations;
        projection.method = ProjectionMethod::tsne;
        projection.perplexity = params.perplexity;
        projection.iterations = params.iterations;
        return project_tsne_squared(squared, params).coords;
    }
    projection.method = ProjectionMethod::mds;
    projection.perplexity = 0.0;
    projection.iterations = 0;
    return project_mds(squared.cwiseSqrt());
}

}  // namespace

Catalog build_catalog(const Dataset& dataset, const MiningConfig& config, const BuildProgress& progress) {
    Catalog catalog;
    catalog.config = config;
    const std::size_t cap = std::max<std::size_t>(1, dataset.row_count() / 2);
    catalog.config.effective_min_rows = std::min(config.min_rows, cap);

    catalog.dataset.name = dataset.name();
    catalog.dataset.row_count = dataset.row_count();
    catalog.dataset.fields.assign(dataset.fields().begin(), dataset.fields().end());
    for (std::size_t f = 0; f < dataset.field_count(); ++f) {
        catalog.dataset.distributions.push_back(field_distribution(dataset, f, config.distribution_bins));
    }

    MiningOptions options;
    options.enumeration.max_depth = config.max_depth;
    options.enumeration.min_rows = catalog.config.effective_min_rows;
    options.aggregations = config.aggregations;
    options.detectors = config.detectors;
    options.impact = config.impact;
    auto mined = mine_insights(dataset, options, [&](double f) {
        if (progress) progress(0.8 * f);
    });

    // Keep, then order by score descending / id ascending.
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < mined.insights.size(); ++i) {
        if (mined.insights[i].score > config.keep_threshold) order.push_back(i);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& x = mined.insights[a];
        const auto& y = mined.insights[b];
        if (x.score != y.score) return x.score > y.score;
        return x.id < y.id;
    });
    std::vector<std::size_t> insight_subspace;
    catalog.insights.reserve(order.size());
    for (auto i : order) {
        catalog.insights.push_back(std::move(mined.insights[i]));
        insight_subspace.push_back(mined.insight_subspace[i]);
    }

    // Subspace list: every enumerated subspace with its insight count, count
    // descending then enumeration order.
    std::vector<std::pair<std::size_t, std::size_t>> ranked;
    for (std::size_t si = 0; si < mined.subspaces.size(); ++si) ranked.emplace_back(si, 0);
    for (auto si : insight_subspace) ++ranked[si].second;
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    for (const auto& [si, count] : ranked) {
        catalog.subspaces.push_back({to_spec(dataset, mined.subspaces[si]), mined.subspaces[si].rows.size(), count});
    }

    if (catalog.insights.empty()) {
        if (progress) progress(1.0);
        return catalog;
    }

    const std::size_t mapped = std::min(catalog.insights.size(), std::max<std::size_t>(1, config.map_limit));
    // Both embeddings are functions of the row set, so each distinct row set is
    // laid out once and insights sharing it land on the same point.
    std::map<RowSet, std::size_t> unique_index;
    std::vector<const Subspace*> unique;
    std::vector<std::size_t> slot(mapped);
    for (std::size_t i = 0; i < mapped; ++i) {
        const Subspace& subspace = mined.subspaces[insight_subspace[i]];
        auto [it, inserted] = unique_index.try_emplace(subspace.rows, unique.size());
        if (inserted) unique.push_back(&subspace);
        slot[i] = it->second;
    }
    const Eigen::MatrixXd squared = subspace_squared_distances(dataset, unique, config);
    if (progress) progress(0.85);

    Projection projection;
    projection.embedding = config.embedding;
    const auto unique_coords = layout_points(squared, config, projection);
    std::vector<Point2> coords(mapped);
    projection.points.reserve(mapped);
    for (std::size_t i = 0; i < mapped; ++i) {
        coords[i] = unique_coords[slot[i]];
        projection.points.push_back({catalog.insights[i].id, coords[i].x, coords[i].y});
    }
    catalog.projection = std::move(projection);
    if (progress) progress(0.95);

    auto density = kde_density(coords, config.bandwidth, config.grid_width, config.grid_height);
    density.contours = extract_contours(density, config.contour_levels);
    catalog.density = std::move(density);
    if (progress) progress(1.0);
    return catalog;
}

// ---------------------------------------------------------------------------
// Queries

QueryResult query_insights(const Catalog& catalog, const InsightQuery& query) {
    for (const auto& [field, values] : query.brush) {
        const auto it = std::find_if(catalog.dataset.fields.begin(), catalog.dataset.fields.end(),
                                     [&](const FieldSchema& f) { return f.name == field; });
        if (it == catalog.dataset.fields.end() || !it->is_dimension()) {
            throw CatalogError(CatalogErrc::UnknownField, "brush names unknown dimension '" + field + "'");
        }
    }

    auto matches = [&](const Insight& insight) {
        if (query.types && !query.types->contains(insight.type)) return false;
        if (query.min_score && insight.score < *query.min_score) return false;
        if (query.min_significance && insight.significance < *query.min_significance) return false;
        if (query.min_impact && insight.impact < *query.min_impact) return false;
        if (query.breakdown_value && insight.breakdown_value != query.breakdown_value) return false;
        for (const auto& [field, accepted] : query.brush) {
            const auto filter = std::find_if(insight.subspace.begin(), insight.subspace.end(),
                                             [&](const FilterSpec& f) { return f.field == field; });
            if (filter == insight.subspace.end()) {
                if (!accepted.contains(std::string(kNoRestriction))) return false;
            } else if (!accepted.contains(filter->value)) {
                return false;
            }
        }
        return true;
    };

    QueryResult result;
    for (const auto& insight : catalog.insights) {
        if (!matches(insight)) continue;
        const std::size_t position = result.total++;
        if (position < query.offset) continue;
        if (query.limit && result.insights.size() >= *query.limit) continue;
        result.insights.push_back(insight);
    }
    return result;
}

std::vector<std::string> related_insights(const Catalog& catalog, std::string_view insight_id, Relation relation) {
    const Insight* anchor = catalog.find(insight_id);
    if (!anchor) {
        throw CatalogError(CatalogErrc::UnknownInsight, "unknown insight '" + std::string(insight_id) + "'");
    }
    std::vector<std::string> out;
    if (relation.kind == Relation::Kind::same_breakdown_value) {
        if (!anchor->breakdown_value) return out;
        for (const auto& other : catalog.insights) {
            if (other.id != anchor->id && other.breakdown == anchor->breakdown &&
                other.breakdown_value == anchor->breakdown_value) {
                out.push_back(other.id);
            }
        }
        return out;
    }

    if (!catalog.projection) {
        throw CatalogError(CatalogErrc::NoProjection, "catalog has no projection");
    }
    const auto& points = catalog.projection->points;
    const auto self = std::find_if(points.begin(), points.end(),
                                   [&](const ProjectedPoint& p) { return p.insight_id == insight_id; });
    if (self == points.end()) {
        throw CatalogError(CatalogErrc::NoProjection, "insight '" + std::string(insight_id) + "' is not projected");
    }
    std::vector<std::pair<double, const std::string*>> ranked;
    for (const auto& p : points) {
        if (p.insight_id == self->insight_id) continue;
        const double dx = p.x - self->x;
        const double dy = p.y - self->y;
        ranked.emplace_back(dx * dx + dy * dy, &p.insight_id);
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return *a.second < *b.second;
    });
    for (std::size_t i = 0; i < ranked.size() && i < relation.k; ++i) {
        out.push_back(*ranked[i].second);
    }
    return out;
}

}  // namespace insightmap
