#include "tubeseg/grid_graph.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace tubeseg {

void GraphParams::validate() const {
    if (!(init_weight > 0.0) || !std::isfinite(init_weight))
        throw std::invalid_argument("GraphParams: init_weight must be positive and finite");
    if (!(penalty >= 100.0 * init_weight))
        throw std::invalid_argument("GraphParams: penalty must be >= 100 * init_weight");
    if (!(barrier >= 100.0))
        throw std::invalid_argument("GraphParams: barrier must be >= 100");
}

GridGraph::GridGraph(int width, int height, double initial_weight)
    : width_(width), height_(height) {
    if (width < 1 || height < 1)
        throw std::invalid_argument("GridGraph: dimensions must be >= 1");
    if (!(initial_weight > 0.0) || !std::isfinite(initial_weight))
        throw std::invalid_argument("GridGraph: edge weights must be positive and finite");
    h_weights_.assign(static_cast<std::size_t>(width - 1) * height, initial_weight);
    v_weights_.assign(static_cast<std::size_t>(width) * (height - 1), initial_weight);
}

double& GridGraph::edge_ref(PixelCoord u, PixelCoord v) {
    const bool in =
        u.x >= 0 && u.x < width_ && u.y >= 0 && u.y < height_ &&
        v.x >= 0 && v.x < width_ && v.y >= 0 && v.y < height_;
    if (!in) throw std::invalid_argument("GridGraph: pixel out of bounds");
    const int dx = v.x - u.x;
    const int dy = v.y - u.y;
    if (dy == 0 && (dx == 1 || dx == -1)) {
        const int x = dx == 1 ? u.x : v.x;
        return h_weights_[static_cast<std::size_t>(u.y) * (width_ - 1) + x];
    }
    if (dx == 0 && (dy == 1 || dy == -1)) {
        const int y = dy == 1 ? u.y : v.y;
        return v_weights_[static_cast<std::size_t>(y) * width_ + u.x];
    }
    throw std::invalid_argument("GridGraph: pixels are not 4-neighbors");
}

double GridGraph::edge_weight(PixelCoord u, PixelCoord v) const {
    return const_cast<GridGraph*>(this)->edge_ref(u, v);
}

void GridGraph::set_edge_weight(PixelCoord u, PixelCoord v, double weight) {
    if (!(weight > 0.0) || !std::isfinite(weight))
        throw std::invalid_argument("GridGraph: edge weights must be positive and finite");
    edge_ref(u, v) = weight;
}

void GridGraph::add_penalty(PixelCoord u, PixelCoord v, double penalty) {
    if (!(penalty > 0.0) || !std::isfinite(penalty))
        throw std::invalid_argument("GridGraph: penalty must be positive and finite");
    edge_ref(u, v) += penalty;
}

GridGraph uniform_graph(int width, int height, double init_weight) {
    return GridGraph(width, height, init_weight);
}

GridGraph graph_from_gt(const BinaryMask& gt, const GraphParams& params) {
    params.validate();
    GridGraph graph(gt.width, gt.height, params.barrier);
    // Weight 1 iff both endpoints are foreground.
    for (int y = 0; y < gt.height; ++y) {
        for (int x = 0; x + 1 < gt.width; ++x) {
            if (gt.foreground(x, y) && gt.foreground(x + 1, y))
                graph.set_edge_weight({x, y}, {x + 1, y}, 1.0);
        }
    }
    for (int y = 0; y + 1 < gt.height; ++y) {
        for (int x = 0; x < gt.width; ++x) {
            if (gt.foreground(x, y) && gt.foreground(x, y + 1))
                graph.set_edge_weight({x, y}, {x, y + 1}, 1.0);
        }
    }
    return graph;
}

}  // namespace tubeseg
