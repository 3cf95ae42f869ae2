#pragma once

#include <span>

// Small numeric kernels shared by the detectors.
namespace insightmap::stats {

double mean(std::span<const double> xs);
/// Sample variance (n - 1 denominator); 0 for fewer than two values.
double sample_variance(std::span<const double> xs);
double sample_stddev(std::span<const double> xs);
/// Median of a copy of xs. Requires a non-empty span.
double median(std::span<const double> xs);

/// Standard normal CDF.
double normal_cdf(double z);

/// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction.
double incomplete_beta(double a, double b, double x);

/// Two-sided p-value of Student's t with df degrees of freedom.
/// Infinite |t| gives 0.
double student_t_two_sided_p(double t, double df);

/// Pearson correlation; 0 when either side has zero variance.
double pearson(std::span<const double> xs, std::span<const double> ys);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r = 0.0;
    /// Two-sided p-value of the slope t-test (n - 2 df).
    double p_value = 1.0;
};

/// Ordinary least squares of ys against x = 0, 1, ..., n - 1.
LinearFit fit_against_rank(std::span<const double> ys);

struct WelchResult {
    double t = 0.0;
    double df = 0.0;
    double p_value = 1.0;
};

/// Welch's unequal-variance t-test of mean(a) - mean(b).
/// Both samples zero-variance: t = 0 when means are equal, +/-inf otherwise.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace insightmap::stats
