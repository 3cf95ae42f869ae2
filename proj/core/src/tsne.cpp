#include "insightmap/tsne.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "insightmap/embedding.hpp"
#include "insightmap/errors.hpp"

namespace insightmap {

GaussianStream::GaussianStream(std::uint64_t seed) : engine_(seed) {}

double GaussianStream::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // 53-bit uniforms in (0, 1].
    constexpr double kScale = 1.0 / 9007199254740992.0;
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * kScale;
    const double u2 = static_cast<double>(engine_() >> 11) * kScale;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

double max_perplexity(std::size_t points) {
    return points == 0 ? 0.0 : static_cast<double>(points - 1) / 3.0;
}

ConditionalAffinities conditional_affinities(const Eigen::MatrixXd& squared_distances, double perplexity,
                                             double entropy_tolerance) {
    const Eigen::Index m = squared_distances.rows();
    ConditionalAffinities out;
    out.p = Eigen::MatrixXd::Zero(m, m);
    out.betas.assign(static_cast<std::size_t>(m), 1.0);
    out.entropies.assign(static_cast<std::size_t>(m), 0.0);
    const double target = std::log(perplexity);
    constexpr int kMaxSteps = 200;

    std::vector<double> shifted(static_cast<std::size_t>(m));
    std::vector<double> weights(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) {
        double nearest = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < m; ++j) {
            if (j != i) nearest = std::min(nearest, squared_distances(i, j));
        }
        for (Eigen::Index j = 0; j < m; ++j) {
            shifted[static_cast<std::size_t>(j)] = j == i ? 0.0 : squared_distances(i, j) - nearest;
        }

        double beta = 1.0;
        double lo = 0.0;
        double hi = std::numeric_limits<double>::infinity();
        double entropy = 0.0;
        double total = 0.0;
        for (int step = 0; step < kMaxSteps; ++step) {
            total = 0.0;
            double weighted = 0.0;
            for (Eigen::Index j = 0; j < m; ++j) {
                const auto k = static_cast<std::size_t>(j);
                weights[k] = j == i ? 0.0 : std::exp(-beta * shifted[k]);
                total += weights[k];
                weighted += shifted[k] * weights[k];
            }
            entropy = std::log(total) + beta * weighted / total;
            const double diff = entropy - target;
            if (std::fabs(diff) < entropy_tolerance) {
                break;
            }
            if (diff > 0.0) {
                lo = beta;
                beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
            } else {
                hi = beta;
                beta = 0.5 * (beta + lo);
            }
        }
        for (Eigen::Index j = 0; j < m; ++j) {
            out.p(i, j) = weights[static_cast<std::size_t>(j)] / total;
        }
        out.betas[static_cast<std::size_t>(i)] = beta;
        out.entropies[static_cast<std::size_t>(i)] = entropy;
    }
    return out;
}

Eigen::MatrixXd joint_probabilities(const Eigen::MatrixXd& squared_distances, double perplexity,
                                    double entropy_tolerance) {
    const auto conditional = conditional_affinities(squared_distances, perplexity, entropy_tolerance);
    const double m = static_cast<double>(squared_distances.rows());
    Eigen::MatrixXd joint = (conditional.p + conditional.p.transpose()) / (2.0 * m);
    return joint;
}

namespace {

/// Student-t numerators 1 / (1 + |y_i - y_j|^2) (zero diagonal) and their sum.
double student_t_kernel(const std::vector<Point2>& y, std::vector<double>& num) {
    const std::size_t m = y.size();
    num.assign(m * m, 0.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const double dx = y[i].x - y[j].x;
            const double dy = y[i].y - y[j].y;
            const double q = 1.0 / (1.0 + dx * dx + dy * dy);
            num[i * m + j] = q;
            num[j * m + i] = q;
            sum += 2.0 * q;
        }
    }
    return sum;
}

double kl_from_kernel(const Eigen::MatrixXd& joint, const std::vector<double>& num, double sum) {
    const std::size_t m = static_cast<std::size_t>(joint.rows());
    double kl = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const double p = joint(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            if (i == j || p <= 0.0) continue;
            const double q = std::max(num[i * m + j] / sum, std::numeric_limits<double>::min());
            kl += p * std::log(p / q);
        }
    }
    return kl;
}

}  // namespace

double kl_divergence(const Eigen::MatrixXd& joint, const std::vector<Point2>& layout) {
    std::vector<double> num;
    const double sum = student_t_kernel(layout, num);
    return kl_from_kernel(joint, num, sum);
}

TsneResult project_tsne_squared(const Eigen::MatrixXd& squared_distances, const TsneParams& params) {
    const auto m = static_cast<std::size_t>(squared_distances.rows());
    if (m < 4) {
        throw GeometryError(GeometryErrc::TooFewPoints, "t-SNE needs at least 4 points");
    }
    if (!(params.perplexity > 0.0) || params.perplexity > max_perplexity(m)) {
        throw GeometryError(GeometryErrc::PerplexityTooLarge,
                            "perplexity must lie in (0, (M - 1) / 3] for M = " + std::to_string(m));
    }

    const Eigen::MatrixXd joint = joint_probabilities(squared_distances, params.perplexity, params.entropy_tolerance);
    std::vector<double> p(m * m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            p[i * m + j] = joint(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }

    GaussianStream gaussian(params.seed);
    std::vector<Point2> y(m);
    for (auto& point : y) {
        point.x = 1e-4 * gaussian.next();
        point.y = 1e-4 * gaussian.next();
    }

    TsneResult result;
    std::vector<double> num;
    double sum = student_t_kernel(y, num);
    result.kl_initial = kl_from_kernel(joint, num, sum);
    result.kl_after_exaggeration = result.kl_initial;

    std::vector<Point2> update(m);
    std::vector<Point2> gains(m, Point2{1.0, 1.0});
    std::vector<Point2> grad(m);
    const std::size_t exaggerated = std::min(params.exaggeration_iterations, params.iterations);

    for (std::size_t iter = 0; iter < params.iterations; ++iter) {
        if (iter > 0) {
            sum = student_t_kernel(y, num);
        }
        if (iter == exaggerated && exaggerated > 0) {
            result.kl_after_exaggeration = kl_from_kernel(joint, num, sum);
        }
        const double exaggeration = iter < exaggerated ? params.early_exaggeration : 1.0;
        const double momentum =
            iter < params.momentum_switch_iteration ? params.initial_momentum : params.final_momentum;

        for (std::size_t i = 0; i < m; ++i) {
            double gx = 0.0;
            double gy = 0.0;
            const double* prow = &p[i * m];
            const double* nrow = &num[i * m];
            for (std::size_t j = 0; j < m; ++j) {
                if (j == i) continue;
                const double mult = (exaggeration * prow[j] - nrow[j] / sum) * nrow[j];
                gx += mult * (y[i].x - y[j].x);
                gy += mult * (y[i].y - y[j].y);
            }
            grad[i] = {4.0 * gx, 4.0 * gy};
        }

        auto step = [&](double g, double& gain, double& u, double& coord) {
            gain = (g > 0.0) != (u > 0.0) ? gain + 0.2 : gain * 0.8;
            gain = std::max(gain, 0.01);
            u = momentum * u - params.learning_rate * gain * g;
            coord += u;
        };
        double cx = 0.0;
        double cy = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            step(grad[i].x, gains[i].x, update[i].x, y[i].x);
            step(grad[i].y, gains[i].y, update[i].y, y[i].y);
            cx += y[i].x;
            cy += y[i].y;
        }
        cx /= static_cast<double>(m);
        cy /= static_cast<double>(m);
        for (auto& point : y) {
            point.x -= cx;
            point.y -= cy;
        }
    }

    sum = student_t_kernel(y, num);
    result.kl_final = kl_from_kernel(joint, num, sum);
    if (exaggerated == params.iterations) {
        result.kl_after_exaggeration = result.kl_final;
    }
    for (const auto& point : y) {
        if (!std::isfinite(point.x) || !std::isfinite(point.y)) {
            throw GeometryError(GeometryErrc::NotSymmetric, "t-SNE diverged to non-finite coordinates");
        }
    }
    result.coords = std::move(y);
    return result;
}

TsneResult project_tsne(const Eigen::MatrixXd& points, const TsneParams& params) {
    return project_tsne_squared(squared_distances(points), params);
}

}  // namespace insightmap
