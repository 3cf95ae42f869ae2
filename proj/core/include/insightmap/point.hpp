#pragma once

#include <optional>
#include <string_view>

namespace insightmap {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Point2&) const = default;
};

enum class ProjectionMethod { tsne, mds };

std::string_view to_string(ProjectionMethod method);
std::optional<ProjectionMethod> parse_projection_method(std::string_view text);

}  // namespace insightmap
