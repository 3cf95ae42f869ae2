#pragma once

#include <optional>
#include <span>
#include <vector>

#include "insightmap/point.hpp"

namespace insightmap {

struct Bounds {
    double xmin = 0.0;
    double xmax = 0.0;
    double ymin = 0.0;
    double ymax = 0.0;
    bool operator==(const Bounds&) const = default;
};

struct Polyline {
    std::vector<Point2> points;
    bool closed = false;  ///< closed rings do not repeat the first point
    bool operator==(const Polyline&) const = default;
};

struct ContourLevel {
    double fraction = 0.0;   ///< level as a fraction of the grid maximum
    double iso_value = 0.0;  ///< fraction * max(grid)
    std::vector<Polyline> lines;
    bool operator==(const ContourLevel&) const = default;
};

/// Density sampled on a width x height lattice whose nodes span the bounds
/// (node (0, 0) at (xmin, ymin), node (W-1, H-1) at (xmax, ymax)). Values are
/// stored row-major by y.
struct DensityField {
    std::size_t width = 0;
    std::size_t height = 0;
    Bounds bounds;
    double bandwidth = 0.0;
    std::vector<double> grid;
    std::vector<ContourLevel> contours;

    double at(std::size_t ix, std::size_t iy) const { return grid[iy * width + ix]; }
    double x_at(std::size_t ix) const;
    double y_at(std::size_t iy) const;
    double cell_area() const;
    /// Sum of grid values times cell area.
    double riemann_sum() const;

    bool operator==(const DensityField&) const = default;
};

/// Per-axis multivariate Silverman rule sigma_axis * n^(-1/6), averaged over
/// the two axes, floored at 1e-6.
double silverman_bandwidth(std::span<const Point2> points);

/// f(x) = 1 / (M 2 pi h^2) * sum_i exp(-|x - x_i|^2 / (2 h^2)).
double kde_evaluate(std::span<const Point2> points, double bandwidth, Point2 at);

/// Evaluates the KDE on an explicit lattice.
DensityField kde_on_grid(std::span<const Point2> points, double bandwidth, const Bounds& bounds, std::size_t width,
                         std::size_t height);

/// Gaussian KDE over the point bounding box padded by 3h per side. Throws
/// GeometryError(NoPoints) for an empty input and
/// GeometryError(InvalidBandwidth) for a non-positive bandwidth.
DensityField kde_density(std::span<const Point2> points, std::optional<double> bandwidth = std::nullopt,
                         std::size_t width = 64, std::size_t height = 64);

inline constexpr double kDefaultContourLevels[] = {0.25, 0.5, 0.75};

/// Marching-squares iso-lines at fraction * max(grid) per level. Saddle cells
/// are resolved by the average of the four corners. A flat field yields no
/// lines.
std::vector<ContourLevel> extract_contours(const DensityField& field,
                                           std::span<const double> levels = kDefaultContourLevels);

}  // namespace insightmap
