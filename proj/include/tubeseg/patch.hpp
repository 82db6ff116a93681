#pragma once

#include <vector>

#include "tubeseg/types.hpp"

namespace tubeseg {

/// Rectified image patch: L rows by W columns, row i sampled across the
/// normal of path point i, so the traced path is the straight vertical
/// middle column. Row 0 is the farthest predecessor, row L-1 the pixel the
/// patch was extracted at (kept in `anchor`).
struct Patch {
    int width = 0;   // W, odd
    int length = 0;  // L
    std::vector<float> values;  // length * width, row-major, in [0,1]
    PixelCoord anchor;

    float at(int row, int col) const {
        return values[static_cast<std::size_t>(row) * width + col];
    }
    float& at(int row, int col) {
        return values[static_cast<std::size_t>(row) * width + col];
    }
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

/// Path with a sampling frame: unit tangents from central differences and
/// unit normals perpendicular to them, sign-fixed so consecutive normals
/// never flip across the path.
struct FramedPath {
    std::vector<Vec2> points;
    std::vector<Vec2> tangents;
    std::vector<Vec2> normals;
};

/// Builds the sampling frame for a traced path. Tangents use central
/// differences (one-sided at the ends); a single-point line gets the default
/// vertical frame. Degenerate segments (repeated points) reuse the nearest
/// valid direction.
FramedPath frame_path(const Centerline& line);

/// Bilinear sample with clamp-to-border replication; total on all real
/// coordinates and exact at integer pixel positions.
float bilinear_sample(const GridImage& image, double x, double y);

/// Samples the W-wide band around the framed path:
///   values[i][j] = image(points[i] + (j - (W-1)/2) * normals[i])
/// with bilinear interpolation and border clamping. W must be odd.
Patch extract_rectified_patch(const GridImage& image, const FramedPath& frame, int patch_width);

}  // namespace tubeseg
