#include <algorithm>
#include <cstdint>
#include <unordered_map>

#include "insightmap/density.hpp"

namespace insightmap {

namespace {

// Lattice edges: horizontal edge (ix, iy)-(ix+1, iy) and vertical edge
// (ix, iy)-(ix, iy+1) get disjoint integer keys.
struct EdgeKeys {
    std::size_t width;
    std::size_t height;
    std::uint64_t horizontal(std::size_t ix, std::size_t iy) const { return 2 * (iy * width + ix); }
    std::uint64_t vertical(std::size_t ix, std::size_t iy) const { return 2 * (iy * width + ix) + 1; }
};

struct Segment {
    std::uint64_t a;
    std::uint64_t b;
};

class LevelTracer {
public:
    LevelTracer(const DensityField& field, double iso) : field_(field), iso_(iso), keys_{field.width, field.height} {}

    std::vector<Polyline> trace() {
        for (std::size_t iy = 0; iy + 1 < field_.height; ++iy) {
            for (std::size_t ix = 0; ix + 1 < field_.width; ++ix) {
                march_cell(ix, iy);
            }
        }
        return chain();
    }

private:
    bool high(std::size_t ix, std::size_t iy) const { return field_.at(ix, iy) >= iso_; }

    Point2 crossing(std::size_t ax, std::size_t ay, std::size_t bx, std::size_t by) const {
        const double va = field_.at(ax, ay);
        const double vb = field_.at(bx, by);
        const double t = vb == va ? 0.5 : std::clamp((iso_ - va) / (vb - va), 0.0, 1.0);
        const double x0 = field_.x_at(ax);
        const double y0 = field_.y_at(ay);
        return {x0 + t * (field_.x_at(bx) - x0), y0 + t * (field_.y_at(by) - y0)};
    }

    std::uint64_t edge_point(int edge, std::size_t ix, std::size_t iy) {
        std::uint64_t key = 0;
        Point2 p;
        switch (edge) {
            case 0:  // bottom
                key = keys_.horizontal(ix, iy);
                if (!points_.contains(key)) p = crossing(ix, iy, ix + 1, iy);
                break;
            case 1:  // right
                key = keys_.vertical(ix + 1, iy);
                if (!points_.contains(key)) p = crossing(ix + 1, iy, ix + 1, iy + 1);
                break;
            case 2:  // top
                key = keys_.horizontal(ix, iy + 1);
                if (!points_.contains(key)) p = crossing(ix, iy + 1, ix + 1, iy + 1);
                break;
            default:  // left
                key = keys_.vertical(ix, iy);
                if (!points_.contains(key)) p = crossing(ix, iy, ix, iy + 1);
                break;
        }
        points_.try_emplace(key, p);
        return key;
    }

    void add(int e0, int e1, std::size_t ix, std::size_t iy) {
        const auto a = edge_point(e0, ix, iy);
        const auto b = edge_point(e1, ix, iy);
        const std::size_t id = segments_.size();
        segments_.push_back({a, b});
        incident_[a].push_back(id);
        incident_[b].push_back(id);
    }

    void march_cell(std::size_t ix, std::size_t iy) {
        // corners: 0 bottom-left, 1 bottom-right, 2 top-right, 3 top-left
        const int mask = (high(ix, iy) ? 1 : 0) | (high(ix + 1, iy) ? 2 : 0) | (high(ix + 1, iy + 1) ? 4 : 0) |
                         (high(ix, iy + 1) ? 8 : 0);
        // edges: 0 bottom, 1 right, 2 top, 3 left
        switch (mask) {
            case 0:
            case 15: return;
            case 1:
            case 14: add(3, 0, ix, iy); return;
            case 2:
            case 13: add(0, 1, ix, iy); return;
            case 3:
            case 12: add(3, 1, ix, iy); return;
            case 4:
            case 11: add(1, 2, ix, iy); return;
            case 6:
            case 9: add(0, 2, ix, iy); return;
            case 7:
            case 8: add(2, 3, ix, iy); return;
            default: break;
        }
        const double centre =
            0.25 * (field_.at(ix, iy) + field_.at(ix + 1, iy) + field_.at(ix + 1, iy + 1) + field_.at(ix, iy + 1));
        const bool centre_high = centre >= iso_;
        if (mask == 5) {  // bottom-left and top-right high
            if (centre_high) {
                add(0, 1, ix, iy);
                add(2, 3, ix, iy);
            } else {
                add(3, 0, ix, iy);
                add(1, 2, ix, iy);
            }
        } else {  // 10: bottom-right and top-left high
            if (centre_high) {
                add(3, 0, ix, iy);
                add(1, 2, ix, iy);
            } else {
                add(0, 1, ix, iy);
                add(2, 3, ix, iy);
            }
        }
    }

    std::vector<Polyline> chain() {
        std::vector<Polyline> lines;
        std::vector<bool> used(segments_.size(), false);

        auto walk = [&](std::size_t first, std::uint64_t start) {
            Polyline line;
            line.points.push_back(points_.at(start));
            std::size_t seg = first;
            std::uint64_t at = start;
            while (true) {
                used[seg] = true;
                const std::uint64_t next = segments_[seg].a == at ? segments_[seg].b : segments_[seg].a;
                if (next == start) {
                    line.closed = true;
                    break;
                }
                line.points.push_back(points_.at(next));
                at = next;
                const auto& around = incident_.at(at);
                const auto it =
                    std::find_if(around.begin(), around.end(), [&](std::size_t s) { return !used[s]; });
                if (it == around.end()) break;
                seg = *it;
            }
            return line;
        };

        // Open lines start at an endpoint touched by a single segment; scan in
        // segment order so output is deterministic.
        for (std::size_t s = 0; s < segments_.size(); ++s) {
            if (used[s]) continue;
            for (auto end : {segments_[s].a, segments_[s].b}) {
                if (!used[s] && incident_.at(end).size() == 1) {
                    lines.push_back(walk(s, end));
                }
            }
        }
        for (std::size_t s = 0; s < segments_.size(); ++s) {
            if (!used[s]) {
                lines.push_back(walk(s, segments_[s].a));
            }
        }
        return lines;
    }

    const DensityField& field_;
    double iso_;
    EdgeKeys keys_;
    std::vector<Segment> segments_;
    std::unordered_map<std::uint64_t, Point2> points_;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> incident_;
};

}  // namespace

std::vector<ContourLevel> extract_contours(const DensityField& field, std::span<const double> levels) {
    std::vector<ContourLevel> out;
    if (field.grid.empty() || field.width < 2 || field.height < 2) {
        return out;
    }
    const double peak = *std::max_element(field.grid.begin(), field.grid.end());
    const double floor = *std::min_element(field.grid.begin(), field.grid.end());
    if (!(peak > 0.0) || peak == floor) {
        return out;
    }
    for (double fraction : levels) {
        ContourLevel level;
        level.fraction = fraction;
        level.iso_value = fraction * peak;
        level.lines = LevelTracer(field, level.iso_value).trace();
        out.push_back(std::move(level));
    }
    return out;
}

}  // namespace insightmap
