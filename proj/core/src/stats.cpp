#include "insightmap/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace insightmap::stats {

double mean(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return ss / static_cast<double>(xs.size() - 1);
}

double sample_stddev(std::span<const double> xs) { return std::sqrt(sample_variance(xs)); }

double median(std::span<const double> xs) {
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    return n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

namespace {

double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIterations = 500;
    constexpr double kEpsilon = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEpsilon) break;
    }
    return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
    if (std::isnan(t)) return 1.0;
    if (std::isinf(t)) return 0.0;
    if (df <= 0.0) return 1.0;
    const double x = df / (df + t * t);
    return std::clamp(incomplete_beta(0.5 * df, 0.5, x), 0.0, 1.0);
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
    const std::size_t n = std::min(xs.size(), ys.size());
    if (n < 2) return 0.0;
    const double mx = mean(xs.first(n));
    const double my = mean(ys.first(n));
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) return 0.0;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

LinearFit fit_against_rank(std::span<const double> ys) {
    LinearFit fit;
    const std::size_t n = ys.size();
    if (n < 2) return fit;
    const double mx = 0.5 * static_cast<double>(n - 1);
    const double my = mean(ys);
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = static_cast<double>(i) - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (syy <= 0.0) {
        fit.slope = 0.0;
        fit.intercept = my;
        return fit;
    }
    fit.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    if (n > 2) {
        const double one_minus_r2 = 1.0 - fit.r * fit.r;
        if (one_minus_r2 <= 0.0) {
            fit.p_value = 0.0;
        } else {
            const double df = static_cast<double>(n - 2);
            fit.p_value = student_t_two_sided_p(fit.r * std::sqrt(df / one_minus_r2), df);
        }
    }
    return fit;
}

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
    WelchResult result;
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double diff = mean(a) - mean(b);
    const double va = sample_variance(a) / na;
    const double vb = sample_variance(b) / nb;
    const double se2 = va + vb;
    if (se2 <= 0.0) {
        result.df = na + nb - 2.0;
        if (diff == 0.0) {
            result.t = 0.0;
            result.p_value = 1.0;
        } else {
            result.t = std::copysign(std::numeric_limits<double>::infinity(), diff);
            result.p_value = 0.0;
        }
        return result;
    }
    result.t = diff / std::sqrt(se2);
    result.df = se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    result.p_value = student_t_two_sided_p(result.t, result.df);
    return result;
}

}  // namespace insightmap::stats
