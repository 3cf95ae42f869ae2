#pragma once

#include <vector>

#include <Eigen/Core>

#include "insightmap/point.hpp"

namespace insightmap {

/// Classical (Torgerson) MDS into two dimensions: double-centres the squared
/// distances, keeps the two largest eigenpairs of the Gram matrix (negative
/// eigenvalues clamped to zero) and scales eigenvectors by sqrt(eigenvalue).
/// Each axis is flipped so its largest-magnitude coordinate is positive.
///
/// Throws GeometryError(NotSymmetric) for a non-square, asymmetric or
/// non-zero-diagonal input and GeometryError(TooFewPoints) for M < 3.
std::vector<Point2> project_mds(const Eigen::MatrixXd& distances);

}  // namespace insightmap
