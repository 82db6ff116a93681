#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tubeseg/types.hpp"

namespace tubeseg {

/// Parameters for synthetic tubular scenes. Tubes are smoothed random walks
/// with bounded turning angle, rasterized at per-tube width; the image is a
/// two-level intensity map with optional Gaussian noise and blur.
struct SceneSpec {
    int width = 128;
    int height = 128;
    int min_tubes = 1;
    int max_tubes = 3;
    double min_tube_width = 5.0;  // pixels, >= 2
    double max_tube_width = 9.0;
    double curvature = 0.10;      // max heading change per unit step, radians
    double fg_mean = 0.75;
    double bg_mean = 0.35;
    double noise_sigma = 0.05;
    double blur_sigma = 0.0;
    std::uint32_t seed = 0;

    void validate() const;
};

/// Synthetic scene with exact ground truth. Every centerline pixel is
/// foreground in the mask and each endpoint pair lies on its centerline.
struct Scene {
    GridImage image;
    BinaryMask mask;
    std::vector<Centerline> centerlines;
    std::vector<std::pair<PixelCoord, PixelCoord>> endpoints;
};

/// Deterministic per seed. Throws DataError when no tube fits the given
/// dimensions.
Scene generate_scene(const SceneSpec& spec);

}  // namespace tubeseg
