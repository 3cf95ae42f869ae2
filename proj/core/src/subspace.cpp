#include "insightmap/subspace.hpp"

#include <algorithm>

#include "insightmap/errors.hpp"

namespace insightmap {

bool Subspace::filters_field(std::size_t field) const {
    return std::any_of(filters.begin(), filters.end(), [field](const Filter& f) { return f.field == field; });
}

std::optional<std::int32_t> Subspace::value_of(std::size_t field) const {
    for (const auto& f : filters) {
        if (f.field == field) return f.value;
    }
    return std::nullopt;
}

Subspace make_subspace(const Dataset& dataset, std::vector<Filter> filters) {
    std::sort(filters.begin(), filters.end());
    for (std::size_t i = 1; i < filters.size(); ++i) {
        if (filters[i].field == filters[i - 1].field) {
            throw SubspaceError(SubspaceErrc::NotADimension, "at most one filter per field");
        }
    }
    for (const auto& f : filters) {
        if (!dataset.field(f.field).is_dimension()) {
            throw SubspaceError(SubspaceErrc::NotADimension,
                                "filter field '" + dataset.field(f.field).name + "' is not a dimension");
        }
    }
    Subspace subspace;
    subspace.filters = std::move(filters);
    for (std::size_t r = 0; r < dataset.row_count(); ++r) {
        bool keep = true;
        for (const auto& f : subspace.filters) {
            if (dataset.codes(f.field)[r] != f.value) {
                keep = false;
                break;
            }
        }
        if (keep) {
            subspace.rows.push_back(static_cast<std::uint32_t>(r));
        }
    }
    return subspace;
}

std::string subspace_label(const Dataset& dataset, const Subspace& subspace) {
    std::string out;
    for (const auto& f : subspace.filters) {
        if (!out.empty()) out += " & ";
        const auto& schema = dataset.field(f.field);
        out += schema.name + "=" + schema.domain[static_cast<std::size_t>(f.value)];
    }
    return out;
}

std::vector<Subspace> enumerate_subspaces(const Dataset& dataset, const EnumerationOptions& options) {
    const auto dims = dataset.dimension_indices();
    std::vector<Subspace> out;

    Subspace root;
    root.rows = dataset.all_rows();
    out.push_back(root);
    if (options.max_depth == 0 || root.rows.size() < options.min_rows) {
        return out;
    }

    // Frontier of the previous depth, in emission order.
    std::vector<std::size_t> frontier{0};
    for (std::size_t depth = 1; depth <= options.max_depth && !frontier.empty(); ++depth) {
        std::vector<std::size_t> next;
        for (std::size_t parent_index : frontier) {
            // Copy: out may reallocate while children are appended.
            const Subspace parent = out[parent_index];
            const std::size_t last_field = parent.filters.empty() ? 0 : parent.filters.back().field + 1;
            for (std::size_t field : dims) {
                if (field < last_field) {
                    continue;
                }
                const auto codes = dataset.codes(field);
                std::vector<RowSet> buckets(dataset.field(field).cardinality());
                for (auto r : parent.rows) {
                    const auto code = codes[r];
                    if (code != Dataset::kMissingCode) {
                        buckets[static_cast<std::size_t>(code)].push_back(r);
                    }
                }
                for (std::size_t k = 0; k < buckets.size(); ++k) {
                    if (buckets[k].size() < options.min_rows) {
                        continue;
                    }
                    Subspace child;
                    child.filters = parent.filters;
                    child.filters.push_back({field, static_cast<std::int32_t>(k)});
                    child.rows = std::move(buckets[k]);
                    next.push_back(out.size());
                    out.push_back(std::move(child));
                }
            }
        }
        frontier = std::move(next);
    }
    return out;
}

SiblingGroup sibling_groups(const Dataset& dataset, const Subspace& subspace, std::size_t breakdown) {
    const auto& schema = dataset.field(breakdown);
    if (!schema.is_dimension()) {
        throw SubspaceError(SubspaceErrc::NotADimension, "breakdown '" + schema.name + "' is not a dimension");
    }
    if (subspace.filters_field(breakdown)) {
        throw SubspaceError(SubspaceErrc::BreakdownFiltered,
                            "breakdown '" + schema.name + "' is already fixed by a subspace filter");
    }
    const auto codes = dataset.codes(breakdown);
    std::vector<RowSet> buckets(schema.cardinality());
    for (auto r : subspace.rows) {
        const auto code = codes[r];
        if (code != Dataset::kMissingCode) {
            buckets[static_cast<std::size_t>(code)].push_back(r);
        }
    }
    SiblingGroup group;
    group.filters = subspace.filters;
    group.breakdown = breakdown;
    for (std::size_t k = 0; k < buckets.size(); ++k) {
        if (!buckets[k].empty()) {
            group.series.push_back({static_cast<std::int32_t>(k), std::move(buckets[k])});
        }
    }
    return group;
}

std::vector<SeriesPoint> series_values(const Dataset& dataset, const SiblingGroup& group,
                                       std::optional<std::size_t> measure, Aggregation agg,
                                       std::optional<std::size_t> order_by) {
    std::vector<SeriesPoint> out;
    out.reserve(group.series.size());
    for (const auto& member : group.series) {
        try {
            out.push_back({member.value, aggregate(dataset, member.rows, measure, agg, order_by)});
        } catch (const AggregateError& e) {
            if (e.code() != AggregateErrc::EmptyRowSet) {
                throw;
            }
        }
    }
    return out;
}

}  // namespace insightmap
