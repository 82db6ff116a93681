#pragma once

#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tubeseg {

/// Unreadable or malformed input data (files, headers, dimensions).
/// The CLI maps this to exit code 3.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Pixel position: x = column, y = row, origin at the top-left corner.
struct PixelCoord {
    int x = 0;
    int y = 0;

    bool operator==(const PixelCoord&) const = default;
};

enum class Label : std::uint8_t { Background = 0, Foreground = 1 };

/// Scalar-intensity raster with values in [0,1], stored row-major.
struct GridImage {
    int width = 0;
    int height = 0;
    std::vector<float> data;

    GridImage() = default;
    GridImage(int w, int h, float fill = 0.0f)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {
        if (w < 1 || h < 1) throw std::invalid_argument("GridImage: dimensions must be >= 1");
    }

    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * width + x;
    }
    bool in_bounds(PixelCoord p) const {
        return p.x >= 0 && p.x < width && p.y >= 0 && p.y < height;
    }
    float at(int x, int y) const {
        assert(in_bounds({x, y}));
        return data[index(x, y)];
    }
    float& at(int x, int y) {
        assert(in_bounds({x, y}));
        return data[index(x, y)];
    }
};

/// Per-pixel foreground/background labels, row-major.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<Label> labels;

    BinaryMask() = default;
    BinaryMask(int w, int h, Label fill = Label::Background)
        : width(w), height(h), labels(static_cast<std::size_t>(w) * h, fill) {
        if (w < 1 || h < 1) throw std::invalid_argument("BinaryMask: dimensions must be >= 1");
    }

    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * width + x;
    }
    bool in_bounds(PixelCoord p) const {
        return p.x >= 0 && p.x < width && p.y >= 0 && p.y < height;
    }
    Label at(int x, int y) const {
        assert(in_bounds({x, y}));
        return labels[index(x, y)];
    }
    Label& at(int x, int y) {
        assert(in_bounds({x, y}));
        return labels[index(x, y)];
    }
    bool foreground(int x, int y) const { return at(x, y) == Label::Foreground; }

    std::size_t foreground_count() const {
        std::size_t n = 0;
        for (Label l : labels) n += (l == Label::Foreground);
        return n;
    }

    bool operator==(const BinaryMask&) const = default;
};

/// Ordered pixel sequence; non-empty, consecutive points distinct.
using Centerline = std::vector<PixelCoord>;

}  // namespace tubeseg
