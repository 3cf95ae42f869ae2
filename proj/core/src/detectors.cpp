#include "insightmap/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "insightmap/stats.hpp"

namespace insightmap {

namespace {
constexpr double kInfinity = std::numeric_limits<double>::infinity();
}

std::optional<TopOneResult> detect_top_one(std::span<const double> series, const DetectorConfig& config) {
    const std::size_t n = series.size();
    if (n < config.top_one_min_length || n < 3) {
        return std::nullopt;
    }
    std::size_t leader = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (series[i] > series[leader]) leader = i;
    }
    std::vector<double> rest;
    rest.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        if (i != leader) rest.push_back(series[i]);
    }
    if (*std::max_element(rest.begin(), rest.end()) >= series[leader]) {
        return std::nullopt;
    }
    const double sd = stats::sample_stddev(rest);
    if (!(sd > 0.0)) {
        return std::nullopt;
    }
    const double z = (series[leader] - stats::mean(rest)) / sd;
    if (z < config.top_one_min_z) {
        return std::nullopt;
    }
    return TopOneResult{leader, z, stats::normal_cdf(z)};
}

std::optional<AttributionResult> detect_attribution(std::span<const double> series, const DetectorConfig& config) {
    if (series.size() < config.attribution_min_length || series.empty()) {
        return std::nullopt;
    }
    double total = 0.0;
    for (double v : series) {
        if (v < 0.0) return std::nullopt;
        total += v;
    }
    if (!(total > 0.0)) {
        return std::nullopt;
    }
    AttributionResult result;
    result.shares.reserve(series.size());
    for (double v : series) {
        result.shares.push_back(v / total);
    }
    for (std::size_t i = 1; i < result.shares.size(); ++i) {
        if (result.shares[i] > result.shares[result.leader]) result.leader = i;
    }
    const double top = result.shares[result.leader];
    if (top < config.attribution_min_share) {
        return std::nullopt;
    }
    result.significance = std::min(1.0, top);
    return result;
}

std::optional<ChangePointResult> detect_change_point(std::span<const double> series, const DetectorConfig& config) {
    const std::size_t n = series.size();
    if (n < config.change_point_min_length || n < 4) {
        return std::nullopt;
    }
    std::optional<std::size_t> best_split;
    stats::WelchResult best;
    for (std::size_t s = 2; s + 2 <= n; ++s) {
        const auto test = stats::welch_t_test(series.first(s), series.subspan(s));
        if (!best_split || std::fabs(test.t) > std::fabs(best.t)) {
            best_split = s;
            best = test;
        }
    }
    if (!best_split || best.t == 0.0 || best.p_value > config.change_point_max_p) {
        return std::nullopt;
    }
    ChangePointResult result;
    result.split = *best_split;
    result.mean_before = stats::mean(series.first(result.split));
    result.mean_after = stats::mean(series.subspan(result.split));
    result.t = best.t;
    result.p_value = best.p_value;
    result.significance = 1.0 - best.p_value;
    return result;
}

std::vector<double> robust_z_scores(std::span<const double> series, double* median_out, double* mad_out) {
    const double med = stats::median(series);
    std::vector<double> deviations;
    deviations.reserve(series.size());
    for (double v : series) {
        deviations.push_back(std::fabs(v - med));
    }
    const double mad = stats::median(deviations);
    std::vector<double> z;
    z.reserve(series.size());
    for (double d : deviations) {
        if (mad > 0.0) {
            z.push_back(0.6745 * d / mad);
        } else {
            z.push_back(d == 0.0 ? 0.0 : kInfinity);
        }
    }
    if (median_out) *median_out = med;
    if (mad_out) *mad_out = mad;
    return z;
}

std::optional<OutlierResult> detect_outlier(std::span<const double> series, const DetectorConfig& config) {
    if (series.size() < config.outlier_min_length || series.empty()) {
        return std::nullopt;
    }
    OutlierResult result;
    const auto z = robust_z_scores(series, &result.median, &result.mad);
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (z[i] > z[result.strongest]) result.strongest = i;
        if (z[i] >= config.outlier_min_z) result.outliers.push_back(i);
    }
    result.max_z = z[result.strongest];
    if (result.outliers.empty()) {
        return std::nullopt;
    }
    result.significance = std::isinf(result.max_z) ? 1.0 : std::min(1.0, result.max_z / 6.0);
    return result;
}

std::optional<TrendResult> detect_trend(std::span<const double> series, const DetectorConfig& config) {
    if (series.size() < config.trend_min_length || series.size() < 3) {
        return std::nullopt;
    }
    const auto fit = stats::fit_against_rank(series);
    if (std::fabs(fit.r) < config.trend_min_abs_r || fit.p_value > config.trend_max_p || fit.slope == 0.0) {
        return std::nullopt;
    }
    TrendResult result;
    result.slope = fit.slope;
    result.intercept = fit.intercept;
    result.r = fit.r;
    result.p_value = fit.p_value;
    result.increasing = fit.slope > 0.0;
    result.significance = std::fabs(fit.r);
    return result;
}

std::optional<CorrelationResult> detect_correlation(std::span<const double> a, std::span<const double> b,
                                                    const DetectorConfig& config) {
    if (a.size() != b.size() || a.size() < config.correlation_min_length || a.size() < 2) {
        return std::nullopt;
    }
    const double r = stats::pearson(a, b);
    if (std::fabs(r) < config.correlation_min_abs_r) {
        return std::nullopt;
    }
    return CorrelationResult{r, std::fabs(r)};
}

std::optional<ClusteringResult> detect_clustering(std::span<const double> series, const DetectorConfig& config) {
    const std::size_t n = series.size();
    if (n < config.clustering_min_length || n < 4) {
        return std::nullopt;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return series[i] < series[j]; });

    // gap k lies between sorted positions k and k + 1
    std::vector<double> gaps(n - 1);
    std::size_t widest = 0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        gaps[k] = series[order[k + 1]] - series[order[k]];
        if (gaps[k] > gaps[widest]) widest = k;
    }
    const double gap = gaps[widest];
    double other_sum = 0.0;
    for (std::size_t k = 0; k < gaps.size(); ++k) {
        if (k != widest) other_sum += gaps[k];
    }
    const double mean_other = other_sum / static_cast<double>(n - 2);
    const std::size_t low_size = widest + 1;
    if (!(mean_other > 0.0) || low_size < 2 || n - low_size < 2) {
        return std::nullopt;
    }
    if (gap < config.clustering_min_gap_ratio * mean_other) {
        return std::nullopt;
    }
    ClusteringResult result;
    result.low.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(low_size));
    result.high.assign(order.begin() + static_cast<std::ptrdiff_t>(low_size), order.end());
    std::sort(result.low.begin(), result.low.end());
    std::sort(result.high.begin(), result.high.end());
    result.gap = gap;
    result.mean_other_gaps = mean_other;
    result.significance = std::min(1.0, gap / (6.0 * mean_other));
    return result;
}

}  // namespace insightmap
