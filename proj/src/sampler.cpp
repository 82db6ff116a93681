#include "tubeseg/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include <json.hpp>

#include "tubeseg/grid_graph.hpp"
#include "tubeseg/img_io.hpp"
#include "tubeseg/patch.hpp"

namespace tubeseg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1D squared-distance transform: lower envelope of the parabolas rooted at
// the finite entries of f. Entries at infinity contribute no parabola.
void edt_1d(const double* f, double* d, int n, int* v, double* z) {
    auto intersect = [&](int q, int p) {
        return ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) /
               (2.0 * q - 2.0 * p);
    };

    int k = -1;
    for (int q = 0; q < n; ++q) {
        if (f[q] == kInf) continue;
        double s = 0.0;
        while (k >= 0) {
            s = intersect(q, v[k]);
            if (s > z[k]) break;
            --k;
        }
        if (k < 0) {
            k = 0;
            v[0] = q;
            z[0] = -kInf;
        } else {
            ++k;
            v[k] = q;
            z[k] = s;
        }
        z[k + 1] = kInf;
    }

    if (k < 0) {  // no sources in this scanline
        for (int q = 0; q < n; ++q) d[q] = kInf;
        return;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const double dx = q - v[k];
        d[q] = dx * dx + f[v[k]];
    }
}

void rasterize_segment(PixelCoord a, PixelCoord b, BinaryMask& out) {
    // Bresenham, endpoints included.
    int x = a.x, y = a.y;
    const int dx = std::abs(b.x - a.x), dy = -std::abs(b.y - a.y);
    const int sx = a.x < b.x ? 1 : -1, sy = a.y < b.y ? 1 : -1;
    int err = dx + dy;
    while (true) {
        out.at(x, y) = Label::Foreground;
        if (x == b.x && y == b.y) break;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y += sy;
        }
    }
}

}  // namespace

void SamplerConfig::validate() const {
    if (trace_length < 1) throw std::invalid_argument("SamplerConfig: trace_length must be >= 1");
    if (patch_width < 3 || patch_width % 2 == 0)
        throw std::invalid_argument("SamplerConfig: patch_width must be odd and >= 3");
    if (max_positives < 1 || max_negatives < 1)
        throw std::invalid_argument("SamplerConfig: sample caps must be >= 1");
    if (dilation_radius < 0 || exclusion_radius < 0)
        throw std::invalid_argument("SamplerConfig: radii must be >= 0");
}

std::size_t SampleSet::count(Label label) const {
    std::size_t n = 0;
    for (const Sample& s : samples) n += (s.label == label);
    return n;
}

PredecessorField determine_pi(const BinaryMask& gt, PixelCoord start,
                              const GraphParams& params) {
    if (!gt.in_bounds(start))
        throw std::invalid_argument("determine_pi: start point out of bounds");
    if (!gt.foreground(start.x, start.y))
        throw std::invalid_argument("determine_pi: start point must be foreground");
    return plain_dijkstra(graph_from_gt(gt, params), start);
}

SampleSet create_tailored_samples(const PredecessorField& pred, const GridImage& image,
                                  const BinaryMask& labels, const SamplerConfig& config,
                                  int iteration, const BinaryMask* ignore) {
    config.validate();
    if (pred.width != image.width || pred.height != image.height ||
        labels.width != image.width || labels.height != image.height)
        throw std::invalid_argument("create_tailored_samples: dimension mismatch");
    if (ignore && (ignore->width != image.width || ignore->height != image.height))
        throw std::invalid_argument("create_tailored_samples: ignore mask dimension mismatch");

    std::vector<std::int32_t> positives;
    std::vector<std::int32_t> negatives;
    for (int y = 0; y < labels.height; ++y) {
        for (int x = 0; x < labels.width; ++x) {
            const std::size_t i = labels.index(x, y);
            if (pred.status[i] != PixelStatus::Finalized) continue;
            if (labels.labels[i] == Label::Foreground) {
                positives.push_back(static_cast<std::int32_t>(i));
            } else if (!ignore || ignore->labels[i] != Label::Foreground) {
                negatives.push_back(static_cast<std::int32_t>(i));
            }
        }
    }
    if (positives.empty())
        throw DataError("create_tailored_samples: no eligible positive anchors");
    if (negatives.empty())
        throw DataError("create_tailored_samples: no eligible negative anchors");

    std::mt19937 rng(config.seed);
    auto pick = [&rng](std::vector<std::int32_t>& candidates, int cap) {
        std::shuffle(candidates.begin(), candidates.end(), rng);
        candidates.resize(std::min(candidates.size(), static_cast<std::size_t>(cap)));
        std::sort(candidates.begin(), candidates.end());
    };
    pick(positives, config.max_positives);
    pick(negatives, config.max_negatives);

    SampleSet set;
    set.samples.reserve(positives.size() + negatives.size());
    set.provenance.reserve(positives.size() + negatives.size());
    auto emit = [&](const std::vector<std::int32_t>& anchors, Label label) {
        for (std::int32_t index : anchors) {
            const PixelCoord anchor{index % labels.width, index / labels.width};
            const Centerline local = backtrace_local(pred, anchor, config.trace_length);
            Patch patch =
                extract_rectified_patch(image, frame_path(local), config.patch_width);
            set.samples.push_back({std::move(patch), label});
            set.provenance.push_back({anchor, iteration});
        }
    };
    emit(positives, Label::Foreground);
    emit(negatives, Label::Background);
    return set;
}

std::vector<double> squared_distance_transform(const BinaryMask& mask) {
    const int w = mask.width;
    const int h = mask.height;
    std::vector<double> dist(static_cast<std::size_t>(w) * h);
    for (std::size_t i = 0; i < dist.size(); ++i)
        dist[i] = mask.labels[i] == Label::Foreground ? 0.0 : kInf;

    const int n = std::max(w, h);
    std::vector<double> f(n), d(n), z(n + 1);
    std::vector<int> v(n);

    for (int x = 0; x < w; ++x) {  // columns
        for (int y = 0; y < h; ++y) f[y] = dist[mask.index(x, y)];
        edt_1d(f.data(), d.data(), h, v.data(), z.data());
        for (int y = 0; y < h; ++y) dist[mask.index(x, y)] = d[y];
    }
    for (int y = 0; y < h; ++y) {  // rows
        for (int x = 0; x < w; ++x) f[x] = dist[mask.index(x, y)];
        edt_1d(f.data(), d.data(), w, v.data(), z.data());
        for (int x = 0; x < w; ++x) dist[mask.index(x, y)] = d[x];
    }
    return dist;
}

PseudoMask pseudo_mask_from_centerlines(const std::vector<Centerline>& lines, int width,
                                        int height, int dilation_radius,
                                        int exclusion_radius) {
    if (width < 1 || height < 1)
        throw std::invalid_argument("pseudo_mask_from_centerlines: bad dimensions");
    if (dilation_radius < 0 || exclusion_radius < 0)
        throw std::invalid_argument("pseudo_mask_from_centerlines: radii must be >= 0");

    BinaryMask line_pixels(width, height);
    for (const Centerline& line : lines) {
        if (line.empty())
            throw std::invalid_argument("pseudo_mask_from_centerlines: empty centerline");
        for (const PixelCoord& p : line)
            if (!line_pixels.in_bounds(p))
                throw std::invalid_argument(
                    "pseudo_mask_from_centerlines: centerline point outside dimensions");
        for (std::size_t i = 0; i + 1 < line.size(); ++i)
            rasterize_segment(line[i], line[i + 1], line_pixels);
        rasterize_segment(line.back(), line.back(), line_pixels);
    }

    const std::vector<double> d2 = squared_distance_transform(line_pixels);
    const double r_fg = static_cast<double>(dilation_radius) * dilation_radius;
    const double r_ex = static_cast<double>(exclusion_radius) * exclusion_radius;

    PseudoMask out{BinaryMask(width, height), BinaryMask(width, height)};
    for (std::size_t i = 0; i < d2.size(); ++i) {
        if (d2[i] <= r_fg)
            out.foreground.labels[i] = Label::Foreground;
        else if (d2[i] <= r_ex)
            out.ignore.labels[i] = Label::Foreground;
    }
    return out;
}

void dump_sample_set(const SampleSet& set, const std::string& directory) {
    namespace fs = std::filesystem;
    fs::create_directories(directory);

    nlohmann::json manifest = nlohmann::json::array();
    for (std::size_t i = 0; i < set.samples.size(); ++i) {
        const Sample& s = set.samples[i];
        char name[32];
        std::snprintf(name, sizeof(name), "sample_%05zu.png", i);

        GridImage img(s.patch.width, s.patch.length);
        img.data.assign(s.patch.values.begin(), s.patch.values.end());
        save_image(img, (fs::path(directory) / name).string());

        manifest.push_back({{"file", name},
                            {"label", s.label == Label::Foreground ? "fg" : "bg"},
                            {"anchor", {set.provenance[i].anchor.x, set.provenance[i].anchor.y}},
                            {"iteration", set.provenance[i].iteration}});
    }
    std::ofstream out(fs::path(directory) / "manifest.json");
    if (!out) throw DataError("cannot write sample manifest in " + directory);
    out << manifest.dump(2) << "\n";
}

}  // namespace tubeseg
