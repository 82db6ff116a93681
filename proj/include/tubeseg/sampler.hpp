#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tubeseg/classifier.hpp"
#include "tubeseg/minpath.hpp"
#include "tubeseg/types.hpp"

namespace tubeseg {

struct SamplerConfig {
    int trace_length = 31;
    int patch_width = 31;
    int max_positives = 2000;  // per image
    int max_negatives = 2000;  // per image
    int dilation_radius = 3;   // pseudo-mask foreground radius
    int exclusion_radius = 8;  // band around foreground excluded from negatives
    std::uint32_t seed = 0;

    void validate() const;
};

struct SampleProvenance {
    PixelCoord anchor;
    int iteration = 0;  // 0 = ground-truth-driven, >= 1 = classifier-driven
};

/// Labeled rectified patches plus per-sample anchor and source iteration.
struct SampleSet {
    std::vector<Sample> samples;
    std::vector<SampleProvenance> provenance;

    std::size_t size() const { return samples.size(); }
    std::size_t count(Label label) const;
};

/// Predecessor field for the initial training iteration: plain Dijkstra over
/// the ground-truth graph (foreground edges weigh 1, everything else the
/// barrier), so back-traced paths stay inside the foreground whenever an
/// all-foreground route exists. `start` must be a foreground pixel.
PredecessorField determine_pi(const BinaryMask& gt, PixelCoord start,
                              const GraphParams& params = {});

/// Draws a seeded uniform random subset of anchors (positives from
/// foreground pixels, negatives from background, skipping `ignore` when
/// given), back-traces `trace_length` steps through `pred` at each anchor,
/// and extracts the rectified patch. Labels come from the anchor's mask
/// value. Output is ordered positives then negatives, each by row-major
/// anchor index, so the result is independent of evaluation order.
SampleSet create_tailored_samples(const PredecessorField& pred, const GridImage& image,
                                  const BinaryMask& labels, const SamplerConfig& config,
                                  int iteration = 0, const BinaryMask* ignore = nullptr);

/// Approximate labels from centerline-only annotations: foreground is the
/// union of disks of radius r_dil around the (rasterized) centerlines, and
/// `ignore` is the band of pixels farther than r_dil but within r_excl,
/// which must not be used as negative anchors.
struct PseudoMask {
    BinaryMask foreground;
    BinaryMask ignore;
};

PseudoMask pseudo_mask_from_centerlines(const std::vector<Centerline>& lines, int width,
                                        int height, int dilation_radius,
                                        int exclusion_radius);

/// Debug dump: each patch as a PNG plus a JSON manifest with labels,
/// anchors, and iterations.
void dump_sample_set(const SampleSet& set, const std::string& directory);

/// Exact squared Euclidean distance to the nearest foreground pixel, per
/// pixel (two-pass lower-envelope transform).
std::vector<double> squared_distance_transform(const BinaryMask& mask);

}  // namespace tubeseg
