#include "insightmap/insight.hpp"

#include <cmath>

namespace insightmap {

std::string_view to_string(InsightType type) {
    switch (type) {
        case InsightType::TopOne: return "TopOne";
        case InsightType::Attribution: return "Attribution";
        case InsightType::ChangePoint: return "ChangePoint";
        case InsightType::Outlier: return "Outlier";
        case InsightType::Trend: return "Trend";
        case InsightType::Correlation: return "Correlation";
        case InsightType::CrossMeasureCorrelation: return "CrossMeasureCorrelation";
        case InsightType::Clustering: return "Clustering";
    }
    return "TopOne";
}

std::optional<InsightType> parse_insight_type(std::string_view text) {
    for (auto type : kAllInsightTypes) {
        if (to_string(type) == text) return type;
    }
    return std::nullopt;
}

std::string to_string(const SubspaceSpec& subspace) {
    if (subspace.empty()) return "*";
    std::string out;
    for (const auto& f : subspace) {
        if (!out.empty()) out += " & ";
        out += f.field + "=" + f.value;
    }
    return out;
}

namespace {

void append_subspace(std::string& out, const SubspaceSpec& subspace) {
    for (std::size_t i = 0; i < subspace.size(); ++i) {
        if (i > 0) out.push_back(';');
        out += subspace[i].field;
        out.push_back('=');
        out += subspace[i].value;
    }
}

}  // namespace

std::string insight_key(InsightType type, const SubspaceSpec& subspace, std::string_view breakdown,
                        std::string_view measure, std::string_view second_measure, Aggregation agg,
                        const SubspaceSpec& other_subspace) {
    std::string key(to_string(type));
    key.push_back('|');
    append_subspace(key, subspace);
    key.push_back('|');
    key += breakdown;
    key.push_back('|');
    key += measure;
    key.push_back('|');
    key += second_measure;
    key.push_back('|');
    key += to_string(agg);
    if (!other_subspace.empty()) {
        key.push_back('|');
        append_subspace(key, other_subspace);
    }
    return key;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string to_hex(std::uint64_t value) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = kDigits[value & 0xF];
        value >>= 4;
    }
    return out;
}

std::string insight_id(std::string_view key) { return "i" + to_hex(fnv1a64(key)); }

double impact(const Dataset& dataset, std::span<const std::uint32_t> rows, std::optional<std::size_t> measure) {
    if (!measure) {
        const auto n = dataset.row_count();
        return n == 0 ? 0.0 : static_cast<double>(rows.size()) / static_cast<double>(n);
    }
    const auto values = dataset.values(*measure);
    double total = 0.0;
    for (double v : values) {
        if (!std::isnan(v)) total += std::fabs(v);
    }
    if (!(total > 0.0)) return 0.0;
    double covered = 0.0;
    for (auto r : rows) {
        const double v = values[r];
        if (!std::isnan(v)) covered += std::fabs(v);
    }
    return std::min(1.0, covered / total);
}

}  // namespace insightmap
