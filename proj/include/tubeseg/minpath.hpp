#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "tubeseg/classifier.hpp"
#include "tubeseg/grid_graph.hpp"
#include "tubeseg/types.hpp"

namespace tubeseg {

enum class PixelStatus : std::uint8_t { Pending = 0, Finalized = 1 };

/// Per-pixel predecessor pointers, minimal distances, and finalization
/// status produced by the solvers. Following `prev` from any finalized pixel
/// reaches the start point (prev = kNoPredecessor there).
struct PredecessorField {
    static constexpr std::int32_t kNoPredecessor = -1;

    int width = 0;
    int height = 0;
    std::vector<std::int32_t> prev;
    std::vector<double> dist;
    std::vector<PixelStatus> status;

    PredecessorField() = default;
    PredecessorField(int w, int h)
        : width(w),
          height(h),
          prev(static_cast<std::size_t>(w) * h, kNoPredecessor),
          dist(static_cast<std::size_t>(w) * h, std::numeric_limits<double>::infinity()),
          status(static_cast<std::size_t>(w) * h, PixelStatus::Pending) {}

    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * width + x;
    }
    bool in_bounds(PixelCoord p) const {
        return p.x >= 0 && p.x < width && p.y >= 0 && p.y < height;
    }
    bool finalized(PixelCoord p) const {
        return status[index(p.x, p.y)] == PixelStatus::Finalized;
    }
};

/// Counters recorded during a solver run.
struct SolveStats {
    std::uint64_t finalized = 0;
    std::uint64_t penalties_applied = 0;
    /// Distances at finalization were non-decreasing (greedy order held).
    bool monotone_finalization = true;
};

struct InferenceParams {
    GraphParams graph;
    int patch_width = 31;   // W, odd, >= 3
    int trace_length = 31;  // L, >= 1

    void validate() const;
};

/// Dijkstra over the given graph from `start`: minimal total edge weight to
/// every pixel plus one optimal predecessor per pixel. Stale heap entries are
/// skipped (lazy deletion); equal distances pop in row-major pixel order.
PredecessorField plain_dijkstra(const GridGraph& graph, PixelCoord start,
                                SolveStats* stats = nullptr);

struct InferenceResult {
    PredecessorField pred;
    BinaryMask mask;
};

/// Minimal-path sweep with dynamic weight adaptation. Edge weights start at
/// params.graph.init_weight and the mask starts all-foreground. Each
/// finalized pixel is classified on its rectified patch (traced through the
/// predecessor field); the label is written into the mask, and on background
/// the edges to still-pending 4-neighbors are increased by params.graph.penalty
/// before the usual relaxation. Runs until every pixel is finalized, or until
/// `stop_at` is finalized when given (pixels never finalized keep the initial
/// foreground label and stay Pending).
InferenceResult apply_classifier(const GridImage& image, PixelCoord start,
                                 const PatchClassifier& classifier,
                                 const InferenceParams& params = {},
                                 SolveStats* stats = nullptr,
                                 std::optional<PixelCoord> stop_at = std::nullopt);

/// Full back-trace: the minimal path from the solver's start point to `end`,
/// ordered start first. Throws if `end` was never finalized.
Centerline backtrace_full(const PredecessorField& pred, PixelCoord end);

/// Fixed-length local back-trace: exactly `length` points ending at `u`,
/// obtained by length-1 predecessor hops. If the start point is reached
/// early the far end is padded by linear extrapolation of the first
/// available direction (vertical (0,-1) when u is the start itself), with
/// padded points clamped to the grid.
Centerline backtrace_local(const PredecessorField& pred, PixelCoord u, int length);

}  // namespace tubeseg
