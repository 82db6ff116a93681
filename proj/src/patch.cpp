#include "tubeseg/patch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tubeseg {

namespace {

double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

Vec2 normalized_or_zero(Vec2 v) {
    const double n = std::sqrt(v.x * v.x + v.y * v.y);
    if (n == 0.0) return {0.0, 0.0};
    return {v.x / n, v.y / n};
}

// Perpendicular of a unit tangent, oriented so that a vertical path with
// increasing y samples columns in +x order (patch equals the direct crop).
Vec2 perpendicular(Vec2 t) { return {t.y, -t.x}; }

}  // namespace

FramedPath frame_path(const Centerline& line) {
    if (line.empty()) throw std::invalid_argument("frame_path: line must be non-empty");

    const std::size_t n = line.size();
    FramedPath frame;
    frame.points.reserve(n);
    for (const PixelCoord& p : line)
        frame.points.push_back({static_cast<double>(p.x), static_cast<double>(p.y)});

    frame.tangents.resize(n);
    if (n == 1) {
        frame.tangents[0] = {0.0, 1.0};  // default vertical frame
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t lo = i == 0 ? 0 : i - 1;
            const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
            frame.tangents[i] = normalized_or_zero(
                {frame.points[hi].x - frame.points[lo].x,
                 frame.points[hi].y - frame.points[lo].y});
        }
        // Repeated points give zero differences; reuse the nearest valid
        // direction so the frame stays total.
        Vec2 last{0.0, 1.0};
        bool seen = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (frame.tangents[i].x != 0.0 || frame.tangents[i].y != 0.0) {
                last = frame.tangents[i];
                seen = true;
            } else if (seen) {
                frame.tangents[i] = last;
            }
        }
        for (std::size_t i = n; i-- > 0;) {
            if (frame.tangents[i].x == 0.0 && frame.tangents[i].y == 0.0)
                frame.tangents[i] = last;
            else
                last = frame.tangents[i];
        }
    }

    frame.normals.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 normal = perpendicular(frame.tangents[i]);
        if (i > 0 && dot(normal, frame.normals[i - 1]) < 0.0)
            normal = {-normal.x, -normal.y};
        frame.normals[i] = normal;
    }
    return frame;
}

float bilinear_sample(const GridImage& image, double x, double y) {
    x = std::clamp(x, 0.0, static_cast<double>(image.width - 1));
    y = std::clamp(y, 0.0, static_cast<double>(image.height - 1));
    const int x0 = static_cast<int>(x);
    const int y0 = static_cast<int>(y);
    const int x1 = std::min(x0 + 1, image.width - 1);
    const int y1 = std::min(y0 + 1, image.height - 1);
    const float fx = static_cast<float>(x - x0);
    const float fy = static_cast<float>(y - y0);

    const float top = image.at(x0, y0) * (1.0f - fx) + image.at(x1, y0) * fx;
    const float bottom = image.at(x0, y1) * (1.0f - fx) + image.at(x1, y1) * fx;
    return top * (1.0f - fy) + bottom * fy;
}

Patch extract_rectified_patch(const GridImage& image, const FramedPath& frame,
                              int patch_width) {
    if (patch_width < 1 || patch_width % 2 == 0)
        throw std::invalid_argument("extract_rectified_patch: patch width must be odd");
    if (frame.points.empty())
        throw std::invalid_argument("extract_rectified_patch: empty frame");

    const int length = static_cast<int>(frame.points.size());
    const int center = (patch_width - 1) / 2;

    Patch patch;
    patch.width = patch_width;
    patch.length = length;
    patch.values.resize(static_cast<std::size_t>(length) * patch_width);
    patch.anchor = {static_cast<int>(std::lround(frame.points.back().x)),
                    static_cast<int>(std::lround(frame.points.back().y))};

    for (int i = 0; i < length; ++i) {
        const Vec2 p = frame.points[i];
        const Vec2 n = frame.normals[i];
        for (int j = 0; j < patch_width; ++j) {
            const double offset = j - center;
            patch.at(i, j) = bilinear_sample(image, p.x + offset * n.x, p.y + offset * n.y);
        }
    }
    return patch;
}

}  // namespace tubeseg
