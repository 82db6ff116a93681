#pragma once

#include <cstddef>
#include <vector>

#include "tubeseg/types.hpp"

namespace tubeseg {

/// Weight constants for graph construction and dynamic adaptation.
/// The penalty must dominate the initial weight (penalty >= 100 * init_weight)
/// and the ground-truth barrier must dominate unit weights (barrier >= 100),
/// so that a single penalized or background edge outweighs any plausible
/// detour at image scale.
struct GraphParams {
    double init_weight = 1.0;  // weight every edge starts with
    double penalty = 1000.0;   // added to edges leaving a background pixel
    double barrier = 1e6;      // weight of non-foreground edges in GT graphs

    void validate() const;
};

/// 4-neighborhood weighted graph over a pixel grid. Horizontal and vertical
/// edge weights live in two dense arrays; all weights are strictly positive.
class GridGraph {
public:
    GridGraph(int width, int height, double initial_weight);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t edge_count() const {
        return h_weights_.size() + v_weights_.size();
    }

    // Edge (x,y)-(x+1,y), x in [0, width-2].
    double horizontal_weight(int x, int y) const {
        return h_weights_[static_cast<std::size_t>(y) * (width_ - 1) + x];
    }
    // Edge (x,y)-(x,y+1), y in [0, height-2].
    double vertical_weight(int x, int y) const {
        return v_weights_[static_cast<std::size_t>(y) * width_ + x];
    }

    /// Weight of the edge between 4-neighbors u and v; throws if not adjacent.
    double edge_weight(PixelCoord u, PixelCoord v) const;
    void set_edge_weight(PixelCoord u, PixelCoord v, double weight);

    /// Adds `penalty` to the single edge between 4-neighbors u and v.
    void add_penalty(PixelCoord u, PixelCoord v, double penalty);

    const std::vector<double>& horizontal_weights() const { return h_weights_; }
    const std::vector<double>& vertical_weights() const { return v_weights_; }

private:
    std::size_t h_index(PixelCoord u, PixelCoord v) const;  // throws on non-adjacency
    double& edge_ref(PixelCoord u, PixelCoord v);

    int width_ = 0;
    int height_ = 0;
    std::vector<double> h_weights_;  // (width-1) * height
    std::vector<double> v_weights_;  // width * (height-1)
};

/// Graph with every edge weight equal to `init_weight` (> 0).
GridGraph uniform_graph(int width, int height, double init_weight);

/// Graph derived from a ground-truth mask: an edge weighs 1 iff both of its
/// endpoints are foreground, otherwise `params.barrier`. Minimal paths between
/// foreground pixels therefore stay inside the foreground whenever an
/// all-foreground route exists.
GridGraph graph_from_gt(const BinaryMask& gt, const GraphParams& params = {});

}  // namespace tubeseg
