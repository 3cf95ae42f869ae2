#include "insightmap/mds.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "insightmap/errors.hpp"

namespace insightmap {

std::string_view to_string(ProjectionMethod method) { return method == ProjectionMethod::tsne ? "tsne" : "mds"; }

std::optional<ProjectionMethod> parse_projection_method(std::string_view text) {
    if (text == "tsne") return ProjectionMethod::tsne;
    if (text == "mds") return ProjectionMethod::mds;
    return std::nullopt;
}

std::vector<Point2> project_mds(const Eigen::MatrixXd& distances) {
    const Eigen::Index m = distances.rows();
    if (distances.cols() != m) {
        throw GeometryError(GeometryErrc::NotSymmetric, "distance matrix must be square");
    }
    if (m < 3) {
        throw GeometryError(GeometryErrc::TooFewPoints, "classical MDS needs at least 3 points");
    }
    const double scale = std::max(1.0, distances.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < m; ++i) {
        if (std::fabs(distances(i, i)) > 1e-12 * scale) {
            throw GeometryError(GeometryErrc::NotSymmetric, "distance matrix diagonal must be zero");
        }
        for (Eigen::Index j = i + 1; j < m; ++j) {
            if (std::fabs(distances(i, j) - distances(j, i)) > 1e-9 * scale) {
                throw GeometryError(GeometryErrc::NotSymmetric, "distance matrix is not symmetric");
            }
        }
    }

    const Eigen::MatrixXd squared = distances.cwiseProduct(distances);
    const Eigen::VectorXd row_mean = squared.rowwise().mean();
    const Eigen::VectorXd col_mean = squared.colwise().mean().transpose();
    const double grand_mean = squared.mean();
    Eigen::MatrixXd gram(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            gram(i, j) = -0.5 * (squared(i, j) - row_mean(i) - col_mean(j) + grand_mean);
        }
    }
    gram = 0.5 * (gram + gram.transpose());

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
    if (solver.info() != Eigen::Success) {
        throw GeometryError(GeometryErrc::NotSymmetric, "eigendecomposition failed");
    }
    // Eigenvalues ascend; the top two are the last columns.
    Eigen::MatrixXd coords(m, 2);
    for (int axis = 0; axis < 2; ++axis) {
        const Eigen::Index col = m - 1 - axis;
        const double lambda = std::max(0.0, solver.eigenvalues()(col));
        coords.col(axis) = solver.eigenvectors().col(col) * std::sqrt(lambda);
        Eigen::Index strongest = 0;
        coords.col(axis).cwiseAbs().maxCoeff(&strongest);
        if (coords(strongest, axis) < 0.0) {
            coords.col(axis) *= -1.0;
        }
    }

    std::vector<Point2> out(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) {
        out[static_cast<std::size_t>(i)] = {coords(i, 0) + 0.0, coords(i, 1) + 0.0};
    }
    return out;
}

}  // namespace insightmap
