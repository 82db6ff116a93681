#pragma once

#include <utility>
#include <vector>

#include "tubeseg/types.hpp"

namespace tubeseg {

struct CenterlineError {
    double mean_error = 0.0;       // pixels
    std::size_t point_count = 0;   // control points evaluated
};

/// Mean Euclidean distance from every point of every path to its nearest
/// ground-truth point, averaged over all points. The nearest lookup is
/// exact (exhaustive). Throws on empty inputs.
CenterlineError mean_centerline_error(const std::vector<Centerline>& paths,
                                      const std::vector<PixelCoord>& gt_points);

/// Dice overlap 2|A∩B| / (|A|+|B|) over foreground pixels; two empty masks
/// score 1.0. Throws on dimension mismatch.
double dice(const BinaryMask& m1, const BinaryMask& m2);

/// Arithmetic mean of per-pair Dice scores; throws on an empty list.
double mean_dice(const std::vector<std::pair<BinaryMask, BinaryMask>>& pairs);

}  // namespace tubeseg
