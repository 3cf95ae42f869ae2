#pragma once

#include <functional>
#include <vector>

#include "insightmap/dataset.hpp"
#include "insightmap/detectors.hpp"
#include "insightmap/insight.hpp"
#include "insightmap/subspace.hpp"

namespace insightmap {

enum class ImpactMode { measure, rows };

std::string_view to_string(ImpactMode mode);
std::optional<ImpactMode> parse_impact_mode(std::string_view text);

struct MiningOptions {
    EnumerationOptions enumeration;
    std::vector<Aggregation> aggregations{Aggregation::sum, Aggregation::average, Aggregation::minimum,
                                          Aggregation::count, Aggregation::gradient};
    DetectorConfig detectors;
    ImpactMode impact = ImpactMode::measure;
};

struct MiningResult {
    std::vector<Subspace> subspaces;  ///< enumeration order
    std::vector<Insight> insights;    ///< context order
    /// For each insight, the index of its subspace in `subspaces`.
    std::vector<std::size_t> insight_subspace;
};

/// Fraction of subspaces processed, in [0, 1].
using ProgressCallback = std::function<void(double)>;

/// Converts an index-based subspace to its name-based form.
SubspaceSpec to_spec(const Dataset& dataset, const Subspace& subspace);

/// Runs every applicable detector over every (subspace, breakdown, measure,
/// aggregation) context. Trend and ChangePoint need an ordinal breakdown;
/// Attribution runs on sum and count only; Correlation pairs subspaces that
/// differ in exactly one filter value. Gradient contexts order by the first
/// ordinal dimension that is neither the breakdown nor filtered.
MiningResult mine_insights(const Dataset& dataset, const MiningOptions& options,
                           const ProgressCallback& progress = {});

}  // namespace insightmap
