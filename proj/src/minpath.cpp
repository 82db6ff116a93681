#include "tubeseg/minpath.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <utility>

#include "tubeseg/patch.hpp"

namespace tubeseg {

namespace {

// Min-heap entry; ties on distance break by row-major pixel index, which
// fixes the finalization order and makes runs reproducible.
using HeapEntry = std::pair<double, std::int32_t>;
using MinHeap = std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>>;

struct Neighbor {
    std::int32_t index;
    PixelCoord coord;
};

// Collects the 4-neighbors of (x, y); returns how many were written.
int neighbors_of(int x, int y, int width, int height, Neighbor out[4]) {
    int n = 0;
    if (x > 0) out[n++] = {static_cast<std::int32_t>(y * width + x - 1), {x - 1, y}};
    if (x + 1 < width) out[n++] = {static_cast<std::int32_t>(y * width + x + 1), {x + 1, y}};
    if (y > 0) out[n++] = {static_cast<std::int32_t>((y - 1) * width + x), {x, y - 1}};
    if (y + 1 < height) out[n++] = {static_cast<std::int32_t>((y + 1) * width + x), {x, y + 1}};
    return n;
}

}  // namespace

void InferenceParams::validate() const {
    graph.validate();
    if (patch_width < 3 || patch_width % 2 == 0)
        throw std::invalid_argument("InferenceParams: patch_width must be odd and >= 3");
    if (trace_length < 1)
        throw std::invalid_argument("InferenceParams: trace_length must be >= 1");
}

PredecessorField plain_dijkstra(const GridGraph& graph, PixelCoord start, SolveStats* stats) {
    const int width = graph.width();
    const int height = graph.height();
    PredecessorField field(width, height);
    if (!field.in_bounds(start))
        throw std::invalid_argument("plain_dijkstra: start point out of bounds");

    const std::int32_t start_index = static_cast<std::int32_t>(field.index(start.x, start.y));
    field.dist[start_index] = 0.0;

    MinHeap heap;
    heap.push({0.0, start_index});
    double last_finalized = 0.0;

    while (!heap.empty()) {
        const auto [d, ui] = heap.top();
        heap.pop();
        if (field.status[ui] == PixelStatus::Finalized) continue;  // stale entry
        field.status[ui] = PixelStatus::Finalized;
        if (stats) {
            stats->finalized++;
            if (d < last_finalized) stats->monotone_finalization = false;
        }
        last_finalized = d;

        const int ux = ui % width;
        const int uy = ui / width;
        Neighbor nb[4];
        const int n = neighbors_of(ux, uy, width, height, nb);
        for (int i = 0; i < n; ++i) {
            if (field.status[nb[i].index] == PixelStatus::Finalized) continue;
            const double candidate = d + graph.edge_weight({ux, uy}, nb[i].coord);
            if (candidate < field.dist[nb[i].index]) {
                field.dist[nb[i].index] = candidate;
                field.prev[nb[i].index] = ui;
                heap.push({candidate, nb[i].index});
            }
        }
    }
    return field;
}

InferenceResult apply_classifier(const GridImage& image, PixelCoord start,
                                 const PatchClassifier& classifier,
                                 const InferenceParams& params, SolveStats* stats,
                                 std::optional<PixelCoord> stop_at) {
    params.validate();
    const int width = image.width;
    const int height = image.height;
    if (!image.in_bounds(start))
        throw std::invalid_argument("apply_classifier: start point out of bounds");
    if (stop_at && !image.in_bounds(*stop_at))
        throw std::invalid_argument("apply_classifier: stop point out of bounds");

    GridGraph graph = uniform_graph(width, height, params.graph.init_weight);
    PredecessorField field(width, height);
    BinaryMask mask(width, height, Label::Foreground);

    const std::int32_t start_index = static_cast<std::int32_t>(field.index(start.x, start.y));
    const std::int32_t stop_index =
        stop_at ? static_cast<std::int32_t>(field.index(stop_at->x, stop_at->y)) : -1;
    field.dist[start_index] = 0.0;

    MinHeap heap;
    heap.push({0.0, start_index});
    double last_finalized = 0.0;

    while (!heap.empty()) {
        const auto [d, ui] = heap.top();
        heap.pop();
        if (field.status[ui] == PixelStatus::Finalized) continue;
        field.status[ui] = PixelStatus::Finalized;
        if (stats) {
            stats->finalized++;
            if (d < last_finalized) stats->monotone_finalization = false;
        }
        last_finalized = d;

        const int ux = ui % width;
        const int uy = ui / width;
        const PixelCoord u{ux, uy};

        // The patch exists only now: its spine is the path the solver itself
        // found up to u.
        const Centerline local = backtrace_local(field, u, params.trace_length);
        const Patch patch = extract_rectified_patch(image, frame_path(local), params.patch_width);
        const Label label = classifier.classify(patch).label;
        mask.labels[ui] = label;

        Neighbor nb[4];
        const int n = neighbors_of(ux, uy, width, height, nb);
        for (int i = 0; i < n; ++i) {
            if (field.status[nb[i].index] == PixelStatus::Finalized) continue;
            if (label == Label::Background) {
                graph.add_penalty(u, nb[i].coord, params.graph.penalty);
                if (stats) stats->penalties_applied++;
            }
            const double candidate = d + graph.edge_weight(u, nb[i].coord);
            if (candidate < field.dist[nb[i].index]) {
                field.dist[nb[i].index] = candidate;
                field.prev[nb[i].index] = ui;
                heap.push({candidate, nb[i].index});
            }
        }

        if (ui == stop_index) break;
    }
    return {std::move(field), std::move(mask)};
}

Centerline backtrace_full(const PredecessorField& pred, PixelCoord end) {
    if (!pred.in_bounds(end))
        throw std::invalid_argument("backtrace_full: end point out of bounds");
    if (!pred.finalized(end))
        throw std::invalid_argument("backtrace_full: end point was never finalized");

    Centerline line;
    std::int32_t cur = static_cast<std::int32_t>(pred.index(end.x, end.y));
    while (cur != PredecessorField::kNoPredecessor) {
        line.push_back({cur % pred.width, cur / pred.width});
        cur = pred.prev[cur];
    }
    std::reverse(line.begin(), line.end());
    return line;
}

Centerline backtrace_local(const PredecessorField& pred, PixelCoord u, int length) {
    if (length < 1) throw std::invalid_argument("backtrace_local: length must be >= 1");
    if (!pred.in_bounds(u))
        throw std::invalid_argument("backtrace_local: point out of bounds");
    if (!pred.finalized(u))
        throw std::invalid_argument("backtrace_local: point was never finalized");

    // Walk towards the start; reversed means [u, parent, grandparent, ...].
    Centerline reversed;
    reversed.reserve(length);
    std::int32_t cur = static_cast<std::int32_t>(pred.index(u.x, u.y));
    while (static_cast<int>(reversed.size()) < length && cur != PredecessorField::kNoPredecessor) {
        reversed.push_back({cur % pred.width, cur / pred.width});
        cur = pred.prev[cur];
    }

    if (static_cast<int>(reversed.size()) < length) {
        // Reached the start early: extrapolate past it along the first
        // available direction (vertical when u is the start itself), clamping
        // to the grid.
        int dx = 0, dy = -1;
        if (reversed.size() >= 2) {
            const PixelCoord far = reversed[reversed.size() - 1];
            const PixelCoord before = reversed[reversed.size() - 2];
            dx = far.x - before.x;
            dy = far.y - before.y;
        }
        while (static_cast<int>(reversed.size()) < length) {
            PixelCoord next{reversed.back().x + dx, reversed.back().y + dy};
            next.x = std::clamp(next.x, 0, pred.width - 1);
            next.y = std::clamp(next.y, 0, pred.height - 1);
            reversed.push_back(next);
        }
    }

    std::reverse(reversed.begin(), reversed.end());
    return reversed;
}

}  // namespace tubeseg
