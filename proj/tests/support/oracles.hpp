#pragma once

// Independent reference computations for test assertions. Nothing here calls
// into the library's numeric kernels.

#include <cstdint>
#include <optional>
#include <vector>

#include "insightmap/dataset.hpp"
#include "insightmap/point.hpp"

namespace oracle {

double mean(const std::vector<double>& xs);
double sample_sd(const std::vector<double>& xs);
double median(std::vector<double> xs);

/// r from sums of products (textbook single formula).
double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

struct Regression {
    double slope;
    double intercept;
    double r;
    double p_value;  ///< from boost::math::students_t
};
Regression regress_on_rank(const std::vector<double>& ys);

struct Welch {
    double t;
    double df;
    double p_value;
};
Welch welch(const std::vector<double>& a, const std::vector<double>& b);

struct Split {
    std::size_t split;
    Welch test;
};
/// Exhaustive split search; largest |t|, earliest on ties.
std::optional<Split> best_split(const std::vector<double>& xs);

double normal_cdf(double z);
double top_one_z(const std::vector<double>& xs, std::size_t* leader = nullptr);
std::vector<double> robust_z(const std::vector<double>& xs, double* median_out = nullptr, double* mad_out = nullptr);

struct Gaps {
    double gap;
    double mean_other;
    std::size_t low_count;
};
Gaps largest_gap(std::vector<double> xs);

/// One filter list per subspace, (field, code) pairs, in canonical order:
/// every subset of dimensions of size <= depth, every value combination,
/// keeping those with at least min_rows rows (the empty list always kept).
std::vector<std::vector<std::pair<std::size_t, std::int32_t>>> brute_force_subspaces(
    const insightmap::Dataset& dataset, std::size_t max_depth, std::size_t min_rows);

/// Closed form sum over dimension subsets S, |S| <= depth, of prod_{a in S} K_a.
std::size_t closed_form_count(const std::vector<std::size_t>& cardinalities, std::size_t max_depth);

double kde(const std::vector<insightmap::Point2>& points, double h, insightmap::Point2 at);

/// Perplexity 2^H (H in bits) of a probability row, skipping `self`.
double row_perplexity(const std::vector<double>& row, std::size_t self);

double distance(insightmap::Point2 a, insightmap::Point2 b);

}  // namespace oracle
