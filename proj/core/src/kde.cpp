#include <algorithm>
#include <cmath>
#include <numbers>

#include "insightmap/density.hpp"
#include "insightmap/errors.hpp"

namespace insightmap {

double DensityField::x_at(std::size_t ix) const {
    if (width < 2) return bounds.xmin;
    return bounds.xmin + (bounds.xmax - bounds.xmin) * static_cast<double>(ix) / static_cast<double>(width - 1);
}

double DensityField::y_at(std::size_t iy) const {
    if (height < 2) return bounds.ymin;
    return bounds.ymin + (bounds.ymax - bounds.ymin) * static_cast<double>(iy) / static_cast<double>(height - 1);
}

double DensityField::cell_area() const {
    if (width < 2 || height < 2) return 0.0;
    return (bounds.xmax - bounds.xmin) / static_cast<double>(width - 1) * (bounds.ymax - bounds.ymin) /
           static_cast<double>(height - 1);
}

double DensityField::riemann_sum() const {
    double total = 0.0;
    for (double v : grid) total += v;
    return total * cell_area();
}

double silverman_bandwidth(std::span<const Point2> points) {
    const std::size_t n = points.size();
    double h = 0.0;
    if (n >= 2) {
        double mx = 0.0;
        double my = 0.0;
        for (const auto& p : points) {
            mx += p.x;
            my += p.y;
        }
        mx /= static_cast<double>(n);
        my /= static_cast<double>(n);
        double sx = 0.0;
        double sy = 0.0;
        for (const auto& p : points) {
            sx += (p.x - mx) * (p.x - mx);
            sy += (p.y - my) * (p.y - my);
        }
        sx = std::sqrt(sx / static_cast<double>(n - 1));
        sy = std::sqrt(sy / static_cast<double>(n - 1));
        const double factor = std::pow(static_cast<double>(n), -1.0 / 6.0);
        h = 0.5 * (sx * factor + sy * factor);
    }
    return std::max(h, 1e-6);
}

double kde_evaluate(std::span<const Point2> points, double bandwidth, Point2 at) {
    const double inv_two_h2 = 1.0 / (2.0 * bandwidth * bandwidth);
    double total = 0.0;
    for (const auto& p : points) {
        const double dx = at.x - p.x;
        const double dy = at.y - p.y;
        total += std::exp(-(dx * dx + dy * dy) * inv_two_h2);
    }
    return total / (static_cast<double>(points.size()) * 2.0 * std::numbers::pi * bandwidth * bandwidth);
}

DensityField kde_on_grid(std::span<const Point2> points, double bandwidth, const Bounds& bounds, std::size_t width,
                         std::size_t height) {
    if (points.empty()) {
        throw GeometryError(GeometryErrc::NoPoints, "KDE needs at least one point");
    }
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
        throw GeometryError(GeometryErrc::InvalidBandwidth, "KDE bandwidth must be positive");
    }
    DensityField field;
    field.width = std::max<std::size_t>(width, 2);
    field.height = std::max<std::size_t>(height, 2);
    field.bounds = bounds;
    field.bandwidth = bandwidth;
    field.grid.assign(field.width * field.height, 0.0);
    for (std::size_t iy = 0; iy < field.height; ++iy) {
        const double y = field.y_at(iy);
        for (std::size_t ix = 0; ix < field.width; ++ix) {
            field.grid[iy * field.width + ix] = kde_evaluate(points, bandwidth, {field.x_at(ix), y});
        }
    }
    return field;
}

DensityField kde_density(std::span<const Point2> points, std::optional<double> bandwidth, std::size_t width,
                         std::size_t height) {
    if (points.empty()) {
        throw GeometryError(GeometryErrc::NoPoints, "KDE needs at least one point");
    }
    if (bandwidth && !(*bandwidth > 0.0)) {
        throw GeometryError(GeometryErrc::InvalidBandwidth, "KDE bandwidth must be positive");
    }
    const double h = bandwidth ? *bandwidth : silverman_bandwidth(points);
    Bounds bounds{points.front().x, points.front().x, points.front().y, points.front().y};
    for (const auto& p : points) {
        bounds.xmin = std::min(bounds.xmin, p.x);
        bounds.xmax = std::max(bounds.xmax, p.x);
        bounds.ymin = std::min(bounds.ymin, p.y);
        bounds.ymax = std::max(bounds.ymax, p.y);
    }
    bounds.xmin -= 3.0 * h;
    bounds.xmax += 3.0 * h;
    bounds.ymin -= 3.0 * h;
    bounds.ymax += 3.0 * h;
    return kde_on_grid(points, h, bounds, width, height);
}

}  // namespace insightmap
