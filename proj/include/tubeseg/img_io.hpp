#pragma once

#include <string>
#include <vector>

#include "tubeseg/types.hpp"

namespace tubeseg {

/// Loads an 8-bit grayscale or RGB image (PNG or binary PGM) as a [0,1]
/// scalar grid. RGB is converted with luminance weights 0.299/0.587/0.114.
/// Throws DataError on unreadable files or unsupported bit depths.
GridImage load_image(const std::string& path);

/// Writes the grid as an 8-bit grayscale PNG (values rounded to 0..255).
void save_image(const GridImage& image, const std::string& path);

/// Masks round-trip through 8-bit grayscale PNG: foreground = 255,
/// background = 0. Loading thresholds at 128.
void save_mask(const BinaryMask& mask, const std::string& path);
BinaryMask load_mask(const std::string& path);

/// Centerlines serialize as a JSON array of [x, y] integer pairs.
void save_centerline(const Centerline& line, const std::string& path);
Centerline load_centerline(const std::string& path);
/// Variant that additionally checks every coordinate against declared raster
/// dimensions and throws DataError on out-of-range points.
Centerline load_centerline(const std::string& path, int width, int height);

/// Multiple lines in one file: a JSON array of centerline arrays.
void save_centerlines(const std::vector<Centerline>& lines, const std::string& path);
std::vector<Centerline> load_centerlines(const std::string& path);

/// Interleaved 8-bit RGB raster, used for overlay rendering.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // 3 * width * height, row-major RGB

    RgbImage() = default;
    RgbImage(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0) {}
};

void save_rgb_png(const RgbImage& image, const std::string& path);

}  // namespace tubeseg
