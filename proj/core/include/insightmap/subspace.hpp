#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "insightmap/dataset.hpp"

namespace insightmap {

/// Equality filter on a dimension: field index and domain code.
struct Filter {
    std::size_t field = 0;
    std::int32_t value = 0;
    bool operator==(const Filter&) const = default;
    auto operator<=>(const Filter&) const = default;
};

/// Conjunction of equality filters, canonically ordered by schema position,
/// together with the rows it selects.
struct Subspace {
    std::vector<Filter> filters;
    RowSet rows;

    std::size_t depth() const noexcept { return filters.size(); }
    bool filters_field(std::size_t field) const;
    std::optional<std::int32_t> value_of(std::size_t field) const;
};

/// Resolves a filter list (sorted into canonical order) against the dataset.
/// Rows missing any filtered field are excluded.
Subspace make_subspace(const Dataset& dataset, std::vector<Filter> filters);

/// Human-readable "field=value" rendering, joined with " & ".
std::string subspace_label(const Dataset& dataset, const Subspace& subspace);

struct EnumerationOptions {
    std::size_t max_depth = 2;
    std::size_t min_rows = 5;
};

/// Lattice walk over equality-filter subspaces. Output is ordered by depth,
/// then by (schema position, domain code) of each filter in turn. The empty
/// subspace is always first; a subspace below min_rows is neither emitted
/// nor extended.
std::vector<Subspace> enumerate_subspaces(const Dataset& dataset, const EnumerationOptions& options);

/// Per-breakdown-value partition of a subspace.
struct SiblingGroup {
    struct Series {
        std::int32_t value = 0;
        RowSet rows;
    };
    std::vector<Filter> filters;  ///< the partitioned subspace's filters
    std::size_t breakdown = 0;
    std::vector<Series> series;  ///< domain order, non-empty members only
};

/// Throws SubspaceError(BreakdownFiltered) when the breakdown is already fixed
/// by a filter, SubspaceError(NotADimension) when it is not a dimension.
SiblingGroup sibling_groups(const Dataset& dataset, const Subspace& subspace, std::size_t breakdown);

struct SeriesPoint {
    std::int32_t value = 0;  ///< breakdown domain code
    double aggregate = 0.0;
    bool operator==(const SeriesPoint&) const = default;
};

/// One aggregate per series, in domain order. Series whose aggregate is
/// undefined (no non-missing measure cells; fewer than two for gradient) are
/// omitted.
std::vector<SeriesPoint> series_values(const Dataset& dataset, const SiblingGroup& group,
                                       std::optional<std::size_t> measure, Aggregation agg,
                                       std::optional<std::size_t> order_by = std::nullopt);

}  // namespace insightmap
