#include "insightmap/mining.hpp"

#include <algorithm>
#include <map>

namespace insightmap {

std::string_view to_string(ImpactMode mode) { return mode == ImpactMode::measure ? "measure" : "rows"; }

std::optional<ImpactMode> parse_impact_mode(std::string_view text) {
    if (text == "measure") return ImpactMode::measure;
    if (text == "rows") return ImpactMode::rows;
    return std::nullopt;
}

SubspaceSpec to_spec(const Dataset& dataset, const Subspace& subspace) {
    SubspaceSpec spec;
    spec.reserve(subspace.filters.size());
    for (const auto& f : subspace.filters) {
        const auto& schema = dataset.field(f.field);
        spec.push_back({schema.name, schema.domain[static_cast<std::size_t>(f.value)]});
    }
    return spec;
}

namespace {

struct Context {
    std::optional<std::size_t> measure;
    Aggregation agg;
};

struct GroupSeries {
    std::size_t breakdown = 0;
    std::vector<std::vector<SeriesPoint>> per_context;
};

std::vector<double> values_of(const std::vector<SeriesPoint>& points) {
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(p.aggregate);
    return out;
}

RowSet row_union(const RowSet& a, const RowSet& b) {
    RowSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

class Miner {
public:
    Miner(const Dataset& dataset, const MiningOptions& options) : dataset_(dataset), options_(options) {
        const bool wants_count = std::find(options.aggregations.begin(), options.aggregations.end(),
                                           Aggregation::count) != options.aggregations.end();
        if (wants_count) {
            contexts_.push_back({std::nullopt, Aggregation::count});
        }
        for (auto m : dataset.measure_indices()) {
            for (auto agg : options.aggregations) {
                if (agg != Aggregation::count) contexts_.push_back({m, agg});
            }
        }
    }

    MiningResult run(const ProgressCallback& progress) {
        result_.subspaces = enumerate_subspaces(dataset_, options_.enumeration);
        specs_.reserve(result_.subspaces.size());
        for (const auto& s : result_.subspaces) specs_.push_back(to_spec(dataset_, s));

        cache_.resize(result_.subspaces.size());
        const double total = static_cast<double>(result_.subspaces.size());
        for (std::size_t si = 0; si < result_.subspaces.size(); ++si) {
            mine_subspace(si);
            if (progress) progress(0.9 * static_cast<double>(si + 1) / total);
        }
        mine_sibling_correlations();
        if (progress) progress(1.0);
        return std::move(result_);
    }

private:
    std::string label(std::size_t field, std::int32_t code) const {
        return dataset_.field(field).domain[static_cast<std::size_t>(code)];
    }

    LabeledSeries labeled(std::size_t breakdown, const std::vector<SeriesPoint>& points) const {
        LabeledSeries out;
        out.reserve(points.size());
        for (const auto& p : points) out.push_back({label(breakdown, p.value), p.aggregate});
        return out;
    }

    std::string measure_name(const std::optional<std::size_t>& measure) const {
        return measure ? dataset_.field(*measure).name : std::string{};
    }

    double impact_for(std::span<const std::uint32_t> rows, const std::optional<std::size_t>& measure) const {
        return impact(dataset_, rows, options_.impact == ImpactMode::measure ? measure : std::nullopt);
    }

    std::optional<std::size_t> order_field(const Subspace& subspace, std::size_t breakdown) const {
        for (auto d : dataset_.dimension_indices()) {
            if (d != breakdown && dataset_.field(d).kind == ValueKind::ordinal && !subspace.filters_field(d)) {
                return d;
            }
        }
        return std::nullopt;
    }

    void emit(InsightType type, std::size_t si, std::size_t breakdown, const Context& ctx, double significance,
              double impact_value, InsightPayload payload, std::optional<std::string> breakdown_value,
              std::string second_measure = {}, const SubspaceSpec& other = {}) {
        Insight insight;
        insight.type = type;
        insight.subspace = specs_[si];
        insight.breakdown = dataset_.field(breakdown).name;
        insight.measure = measure_name(ctx.measure);
        insight.second_measure = std::move(second_measure);
        insight.agg = ctx.agg;
        insight.significance = std::clamp(significance, 0.0, 1.0);
        insight.impact = std::clamp(impact_value, 0.0, 1.0);
        insight.score = insight.significance * insight.impact;
        insight.breakdown_value = std::move(breakdown_value);
        insight.payload = std::move(payload);
        insight.id = insight_id(insight_key(type, insight.subspace, insight.breakdown, insight.measure,
                                            insight.second_measure, insight.agg, other));
        result_.insights.push_back(std::move(insight));
        result_.insight_subspace.push_back(si);
    }

    void mine_subspace(std::size_t si) {
        const Subspace& subspace = result_.subspaces[si];
        const auto& cfg = options_.detectors;
        for (std::size_t breakdown : dataset_.dimension_indices()) {
            if (subspace.filters_field(breakdown)) {
                continue;
            }
            const auto group = sibling_groups(dataset_, subspace, breakdown);
            GroupSeries cached;
            cached.breakdown = breakdown;
            cached.per_context.resize(contexts_.size());
            if (group.series.size() < 2) {
                cache_[si].push_back(std::move(cached));
                continue;
            }
            const bool ordinal = dataset_.field(breakdown).kind == ValueKind::ordinal;
            const auto order_by = order_field(subspace, breakdown);

            for (std::size_t c = 0; c < contexts_.size(); ++c) {
                const Context& ctx = contexts_[c];
                if (ctx.agg == Aggregation::gradient && !order_by) {
                    continue;
                }
                auto points = series_values(dataset_, group, ctx.measure, ctx.agg,
                                            ctx.agg == Aggregation::gradient ? order_by : std::nullopt);
                cached.per_context[c] = points;
                if (points.size() < 2) {
                    continue;
                }
                const auto values = values_of(points);
                const double impact_value = impact_for(subspace.rows, ctx.measure);
                const auto series = labeled(breakdown, points);

                if (auto r = detect_top_one(values, cfg)) {
                    emit(InsightType::TopOne, si, breakdown, ctx, r->significance, impact_value,
                         TopOnePayload{series[r->leader].label, r->z, series}, series[r->leader].label);
                }
                if (ctx.agg == Aggregation::sum || ctx.agg == Aggregation::count) {
                    if (auto r = detect_attribution(values, cfg)) {
                        LabeledSeries shares;
                        for (std::size_t i = 0; i < series.size(); ++i) {
                            shares.push_back({series[i].label, r->shares[i]});
                        }
                        const auto& leader = series[r->leader].label;
                        emit(InsightType::Attribution, si, breakdown, ctx, r->significance, impact_value,
                             AttributionPayload{leader, r->shares[r->leader], std::move(shares), series}, leader);
                    }
                }
                if (ordinal) {
                    if (auto r = detect_change_point(values, cfg)) {
                        const auto& at = series[r->split].label;
                        emit(InsightType::ChangePoint, si, breakdown, ctx, r->significance, impact_value,
                             ChangePointPayload{r->split, at, r->mean_before, r->mean_after, r->t, r->p_value, series},
                             at);
                    }
                }
                if (auto r = detect_outlier(values, cfg)) {
                    OutlierPayload payload;
                    for (auto i : r->outliers) payload.outliers.push_back(series[i].label);
                    payload.strongest = series[r->strongest].label;
                    payload.max_z = r->max_z;
                    payload.median = r->median;
                    payload.mad = r->mad;
                    payload.series = series;
                    const std::string strongest = payload.strongest;
                    emit(InsightType::Outlier, si, breakdown, ctx, r->significance, impact_value, std::move(payload),
                         strongest);
                }
                if (ordinal) {
                    if (auto r = detect_trend(values, cfg)) {
                        emit(InsightType::Trend, si, breakdown, ctx, r->significance, impact_value,
                             TrendPayload{r->slope, r->intercept, r->r, r->p_value, r->increasing, series},
                             std::nullopt);
                    }
                }
                if (auto r = detect_clustering(values, cfg)) {
                    ClusteringPayload payload;
                    payload.gap = r->gap;
                    payload.mean_other_gaps = r->mean_other_gaps;
                    for (auto i : r->low) payload.low.push_back(series[i].label);
                    for (auto i : r->high) payload.high.push_back(series[i].label);
                    payload.series = series;
                    emit(InsightType::Clustering, si, breakdown, ctx, r->significance, impact_value,
                         std::move(payload), std::nullopt);
                }
            }
            mine_cross_measure(si, breakdown, cached);
            cache_[si].push_back(std::move(cached));
        }
    }

    void mine_cross_measure(std::size_t si, std::size_t breakdown, const GroupSeries& cached) {
        const Subspace& subspace = result_.subspaces[si];
        for (std::size_t a = 0; a < contexts_.size(); ++a) {
            const Context& ca = contexts_[a];
            if (!ca.measure) continue;
            for (std::size_t b = a + 1; b < contexts_.size(); ++b) {
                const Context& cb = contexts_[b];
                if (!cb.measure || cb.agg != ca.agg || *cb.measure == *ca.measure) continue;
                auto [xs, ys, labels] = align(cached.per_context[a], cached.per_context[b]);
                if (auto r = detect_correlation(xs, ys, options_.detectors)) {
                    CrossMeasurePayload payload;
                    payload.r = r->r;
                    payload.measure_a = measure_name(ca.measure);
                    payload.measure_b = measure_name(cb.measure);
                    for (std::size_t i = 0; i < labels.size(); ++i) {
                        payload.series_a.push_back({label(breakdown, labels[i]), xs[i]});
                        payload.series_b.push_back({label(breakdown, labels[i]), ys[i]});
                    }
                    emit(InsightType::CrossMeasureCorrelation, si, breakdown, ca, r->significance,
                         impact_for(subspace.rows, ca.measure), std::move(payload), std::nullopt,
                         measure_name(cb.measure));
                }
            }
        }
    }

    struct Aligned {
        std::vector<double> a;
        std::vector<double> b;
        std::vector<std::int32_t> codes;
    };

    static Aligned align(const std::vector<SeriesPoint>& a, const std::vector<SeriesPoint>& b) {
        Aligned out;
        std::size_t i = 0;
        std::size_t j = 0;
        while (i < a.size() && j < b.size()) {
            if (a[i].value < b[j].value) {
                ++i;
            } else if (b[j].value < a[i].value) {
                ++j;
            } else {
                out.a.push_back(a[i].aggregate);
                out.b.push_back(b[j].aggregate);
                out.codes.push_back(a[i].value);
                ++i;
                ++j;
            }
        }
        return out;
    }

    void mine_sibling_correlations() {
        // Subspaces sharing all filters but one, keyed by the filters with the
        // varying position blanked out.
        std::map<std::vector<Filter>, std::vector<std::size_t>> families;
        for (std::size_t si = 0; si < result_.subspaces.size(); ++si) {
            const auto& filters = result_.subspaces[si].filters;
            for (std::size_t k = 0; k < filters.size(); ++k) {
                auto key = filters;
                key[k].value = -2;
                families[std::move(key)].push_back(si);
            }
        }
        for (const auto& [key, members] : families) {
            for (std::size_t x = 0; x < members.size(); ++x) {
                for (std::size_t y = x + 1; y < members.size(); ++y) {
                    correlate_pair(members[x], members[y]);
                }
            }
        }
    }

    void correlate_pair(std::size_t sa, std::size_t sb) {
        const auto rows = row_union(result_.subspaces[sa].rows, result_.subspaces[sb].rows);
        const auto& groups_a = cache_[sa];
        const auto& groups_b = cache_[sb];
        for (std::size_t g = 0; g < groups_a.size() && g < groups_b.size(); ++g) {
            const std::size_t breakdown = groups_a[g].breakdown;
            for (std::size_t c = 0; c < contexts_.size(); ++c) {
                auto [xs, ys, codes] = align(groups_a[g].per_context[c], groups_b[g].per_context[c]);
                if (auto r = detect_correlation(xs, ys, options_.detectors)) {
                    CorrelationPayload payload;
                    payload.r = r->r;
                    payload.other_subspace = specs_[sb];
                    for (std::size_t i = 0; i < codes.size(); ++i) {
                        payload.series_a.push_back({label(breakdown, codes[i]), xs[i]});
                        payload.series_b.push_back({label(breakdown, codes[i]), ys[i]});
                    }
                    emit(InsightType::Correlation, sa, breakdown, contexts_[c], r->significance,
                         impact_for(rows, contexts_[c].measure), std::move(payload), std::nullopt, {}, specs_[sb]);
                }
            }
        }
    }

    const Dataset& dataset_;
    const MiningOptions& options_;
    std::vector<Context> contexts_;
    std::vector<SubspaceSpec> specs_;
    std::vector<std::vector<GroupSeries>> cache_;
    MiningResult result_;
};

}  // namespace

MiningResult mine_insights(const Dataset& dataset, const MiningOptions& options, const ProgressCallback& progress) {
    return Miner(dataset, options).run(progress);
}

}  // namespace insightmap
