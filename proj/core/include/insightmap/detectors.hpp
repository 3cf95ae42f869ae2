#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace insightmap {

/// Firing thresholds and minimum series lengths for the eight detectors.
struct DetectorConfig {
    double top_one_min_z = 3.0;
    double attribution_min_share = 0.5;
    double change_point_max_p = 0.01;
    double outlier_min_z = 3.0;
    double trend_min_abs_r = 0.7;
    double trend_max_p = 0.05;
    double correlation_min_abs_r = 0.8;
    double clustering_min_gap_ratio = 3.0;

    std::size_t top_one_min_length = 4;
    std::size_t attribution_min_length = 2;
    std::size_t change_point_min_length = 6;
    std::size_t outlier_min_length = 5;
    std::size_t trend_min_length = 5;
    std::size_t correlation_min_length = 5;
    std::size_t clustering_min_length = 4;

    bool operator==(const DetectorConfig&) const = default;
};

// Every detector works on a series in breakdown-domain order and reports
// positions into that series. Ties resolve to the earliest position.

struct TopOneResult {
    std::size_t leader = 0;
    double z = 0.0;
    double significance = 0.0;
};
/// z = (max - mean(rest)) / stddev(rest) with the sample stddev of the rest.
std::optional<TopOneResult> detect_top_one(std::span<const double> series, const DetectorConfig& config = {});

struct AttributionResult {
    std::size_t leader = 0;
    std::vector<double> shares;
    double significance = 0.0;
};
/// Requires non-negative values with a positive total.
std::optional<AttributionResult> detect_attribution(std::span<const double> series,
                                                    const DetectorConfig& config = {});

struct ChangePointResult {
    std::size_t split = 0;  ///< first index of the second segment
    double mean_before = 0.0;
    double mean_after = 0.0;
    double t = 0.0;
    double p_value = 1.0;
    double significance = 0.0;
};
/// Exhaustive search over splits 2 <= s <= n - 2 for the largest |Welch t|.
std::optional<ChangePointResult> detect_change_point(std::span<const double> series,
                                                     const DetectorConfig& config = {});

struct OutlierResult {
    std::vector<std::size_t> outliers;  ///< positions with robust z >= threshold
    std::size_t strongest = 0;
    double max_z = 0.0;  ///< +inf when MAD is zero
    double median = 0.0;
    double mad = 0.0;
    double significance = 0.0;
};
/// Robust z_i = 0.6745 |v_i - median| / MAD.
std::optional<OutlierResult> detect_outlier(std::span<const double> series, const DetectorConfig& config = {});

/// Robust z-scores as used by detect_outlier (MAD = 0 maps non-median values to +inf).
std::vector<double> robust_z_scores(std::span<const double> series, double* median_out = nullptr,
                                    double* mad_out = nullptr);

struct TrendResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r = 0.0;
    double p_value = 1.0;
    bool increasing = true;
    double significance = 0.0;
};
std::optional<TrendResult> detect_trend(std::span<const double> series, const DetectorConfig& config = {});

struct CorrelationResult {
    double r = 0.0;
    double significance = 0.0;
};
/// Pearson r over two aligned series (used for both sibling-subspace and
/// cross-measure correlation).
std::optional<CorrelationResult> detect_correlation(std::span<const double> a, std::span<const double> b,
                                                    const DetectorConfig& config = {});

struct ClusteringResult {
    std::vector<std::size_t> low;   ///< positions at or below the split gap
    std::vector<std::size_t> high;  ///< positions above it
    double gap = 0.0;
    double mean_other_gaps = 0.0;
    double significance = 0.0;
};
/// Splits the sorted values at the largest consecutive gap.
std::optional<ClusteringResult> detect_clustering(std::span<const double> series, const DetectorConfig& config = {});

}  // namespace insightmap
