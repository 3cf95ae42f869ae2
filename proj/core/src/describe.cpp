#include <cmath>
#include <cstdio>

#include "insightmap/catalog.hpp"

namespace insightmap {

namespace {

std::string printf_number(const char* format, double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, format, value);
    return buffer;
}

std::string percent(double share) { return printf_number("%#.4g", 100.0 * share) + "%"; }

std::string subspace_phrase(const SubspaceSpec& subspace) {
    if (subspace.empty()) return "the whole dataset";
    std::string out;
    for (std::size_t i = 0; i < subspace.size(); ++i) {
        if (i > 0) out += " and ";
        out += subspace[i].field + " = " + subspace[i].value;
    }
    return out;
}

std::string quantity(Aggregation agg, const std::string& measure) {
    if (measure.empty()) return "the count of rows";
    switch (agg) {
        case Aggregation::sum: return "the total " + measure;
        case Aggregation::average: return "the average " + measure;
        case Aggregation::minimum: return "the minimum " + measure;
        case Aggregation::count: return "the count of " + measure;
        case Aggregation::gradient: return "the gradient of " + measure;
    }
    return measure;
}

std::string join(const std::vector<std::string>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ", ";
        out += values[i];
    }
    return out;
}

}  // namespace

std::string format_number(double value) {
    if (std::isnan(value)) return "NaN";
    if (std::isinf(value)) return value > 0 ? "infinity" : "-infinity";
    return printf_number("%.4g", value + 0.0);
}

std::string describe_insight(const Insight& insight) {
    const std::string within = "Within " + subspace_phrase(insight.subspace) + ", ";
    const std::string what = quantity(insight.agg, insight.measure);
    const std::string& by = insight.breakdown;

    struct Visitor {
        const std::string& within;
        const std::string& what;
        const std::string& by;
        const Insight& insight;

        std::string operator()(const TopOnePayload& p) const {
            return within + by + " " + p.leader + " has by far the highest " + what.substr(4) + " (z " +
                   format_number(p.z) + ").";
        }
        std::string operator()(const AttributionPayload& p) const {
            return within + by + " " + p.leader + " accounts for " + percent(p.share) + " of " + what + ".";
        }
        std::string operator()(const ChangePointPayload& p) const {
            return within + what + " shows a change point across " + by + " at " + p.split_value + " (mean " +
                   format_number(p.mean_before) + " before, " + format_number(p.mean_after) + " after).";
        }
        std::string operator()(const OutlierPayload& p) const {
            return within + what + " is an outlier across " + by + " at " + join(p.outliers) + " (robust z " +
                   format_number(p.max_z) + ").";
        }
        std::string operator()(const TrendPayload& p) const {
            return within + what + " shows an " + (p.increasing ? "increasing" : "decreasing") + " trend across " +
                   by + " (slope " + format_number(p.slope) + ").";
        }
        std::string operator()(const CorrelationPayload& p) const {
            return within + what + " across " + by + " correlates with the same series within " +
                   subspace_phrase(p.other_subspace) + " (r " + format_number(p.r) + ").";
        }
        std::string operator()(const CrossMeasurePayload& p) const {
            return within + quantity(insight.agg, p.measure_a) + " and " + quantity(insight.agg, p.measure_b) +
                   " are correlated across " + by + " (r " + format_number(p.r) + ").";
        }
        std::string operator()(const ClusteringPayload& p) const {
            return within + what + " across " + by + " splits into two clusters, a high group of " +
                   join(p.high) + " and a low group of " + join(p.low) + " (gap " + format_number(p.gap) + ").";
        }
    };
    return std::visit(Visitor{within, what, by, insight}, insight.payload);
}

}  // namespace insightmap
