#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "insightmap/point.hpp"

namespace insightmap {

struct TsneParams {
    double perplexity = 30.0;
    std::uint64_t seed = 42;
    std::size_t iterations = 1000;
    double learning_rate = 200.0;
    double early_exaggeration = 12.0;
    std::size_t exaggeration_iterations = 250;
    std::size_t momentum_switch_iteration = 250;
    double initial_momentum = 0.5;
    double final_momentum = 0.8;
    /// Tolerance on |H(P_i) - log(perplexity)| in the bandwidth search.
    double entropy_tolerance = 1e-5;

    bool operator==(const TsneParams&) const = default;
};

/// Row-conditional affinities P_{j|i} with per-row precision beta_i found by
/// bisection so that the row entropy (nats) matches log(perplexity).
struct ConditionalAffinities {
    Eigen::MatrixXd p;
    std::vector<double> betas;
    std::vector<double> entropies;
};

ConditionalAffinities conditional_affinities(const Eigen::MatrixXd& squared_distances, double perplexity,
                                             double entropy_tolerance = 1e-5);

/// P = (P_{j|i} + P_{i|j}) / (2M).
Eigen::MatrixXd joint_probabilities(const Eigen::MatrixXd& squared_distances, double perplexity,
                                    double entropy_tolerance = 1e-5);

/// KL(P || Q) where Q is the Student-t affinity of the layout.
double kl_divergence(const Eigen::MatrixXd& joint, const std::vector<Point2>& layout);

struct TsneResult {
    std::vector<Point2> coords;
    double kl_initial = 0.0;
    double kl_after_exaggeration = 0.0;
    double kl_final = 0.0;
};

/// Exact t-SNE of the rows of `points` (Euclidean input distances).
/// Throws GeometryError(TooFewPoints) for M < 4 and
/// GeometryError(PerplexityTooLarge) when perplexity > (M - 1) / 3.
TsneResult project_tsne(const Eigen::MatrixXd& points, const TsneParams& params = {});

/// Same as project_tsne, from precomputed squared distances.
TsneResult project_tsne_squared(const Eigen::MatrixXd& squared_distances, const TsneParams& params = {});

/// Largest perplexity accepted for M points.
double max_perplexity(std::size_t points);

/// Seeded standard-normal stream. std::normal_distribution is
/// implementation-defined, so Box-Muller runs over the raw mt19937_64 output.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed);
    double next();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace insightmap
