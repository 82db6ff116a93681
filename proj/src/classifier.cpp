#include "tubeseg/classifier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <numeric>

namespace tubeseg {

static_assert(std::endian::native == std::endian::little,
              "model serialization assumes a little-endian host");

namespace {

constexpr char kModelMagic[4] = {'T', 'S', 'M', '1'};
constexpr std::uint32_t kModelVersion = 1;

double softplus(double t) {
    return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Parameter block offsets for the dense architecture.
struct Layout {
    int input = 0;
    std::size_t w1 = 0, b1 = 0, w2 = 0, b2 = 0, w3 = 0, b3 = 0, total = 0;

    explicit Layout(int input_size) : input(input_size) {
        const std::size_t d = static_cast<std::size_t>(input_size);
        w1 = 0;
        b1 = w1 + ReferenceModel::kHidden1 * d;
        w2 = b1 + ReferenceModel::kHidden1;
        b2 = w2 + ReferenceModel::kHidden2 * ReferenceModel::kHidden1;
        w3 = b2 + ReferenceModel::kHidden2;
        b3 = w3 + ReferenceModel::kHidden2;
        total = b3 + 1;
    }

    bool is_bias(std::size_t i) const {
        return (i >= b1 && i < w2) || (i >= b2 && i < w3) || i == b3;
    }
};

// Patch values standardized by their own mean and deviation.
void standardize(const Patch& patch, std::vector<double>& out) {
    const std::size_t n = patch.values.size();
    out.resize(n);
    double mean = 0.0;
    for (float v : patch.values) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (float v : patch.values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    const double inv_dev = 1.0 / std::sqrt(var + 1e-8);
    for (std::size_t i = 0; i < n; ++i) out[i] = (patch.values[i] - mean) * inv_dev;
}

struct Activations {
    std::vector<double> input;  // standardized patch
    double a1[ReferenceModel::kHidden1];
    double h1[ReferenceModel::kHidden1];
    double a2[ReferenceModel::kHidden2];
    double h2[ReferenceModel::kHidden2];
    double z = 0.0;
};

double forward(const std::vector<double>& params, const Layout& layout, const Patch& patch,
               Activations& act) {
    standardize(patch, act.input);
    const double* w1 = params.data() + layout.w1;
    const double* b1 = params.data() + layout.b1;
    const double* w2 = params.data() + layout.w2;
    const double* b2 = params.data() + layout.b2;
    const double* w3 = params.data() + layout.w3;
    const double b3 = params[layout.b3];
    const int d = layout.input;

    for (int h = 0; h < ReferenceModel::kHidden1; ++h) {
        double acc = b1[h];
        const double* row = w1 + static_cast<std::size_t>(h) * d;
        for (int i = 0; i < d; ++i) acc += row[i] * act.input[i];
        act.a1[h] = acc;
        act.h1[h] = std::tanh(acc);
    }
    for (int k = 0; k < ReferenceModel::kHidden2; ++k) {
        double acc = b2[k];
        const double* row = w2 + static_cast<std::size_t>(k) * ReferenceModel::kHidden1;
        for (int h = 0; h < ReferenceModel::kHidden1; ++h) acc += row[h] * act.h1[h];
        act.a2[k] = acc;
        act.h2[k] = std::tanh(acc);
    }
    double z = b3;
    for (int k = 0; k < ReferenceModel::kHidden2; ++k) z += w3[k] * act.h2[k];
    act.z = z;
    return sigmoid(z);
}

float bilinear_patch(const Patch& patch, double col, double row) {
    col = std::clamp(col, 0.0, static_cast<double>(patch.width - 1));
    row = std::clamp(row, 0.0, static_cast<double>(patch.length - 1));
    const int c0 = static_cast<int>(col);
    const int r0 = static_cast<int>(row);
    const int c1 = std::min(c0 + 1, patch.width - 1);
    const int r1 = std::min(r0 + 1, patch.length - 1);
    const float fc = static_cast<float>(col - c0);
    const float fr = static_cast<float>(row - r0);
    const float top = patch.at(r0, c0) * (1.0f - fc) + patch.at(r0, c1) * fc;
    const float bottom = patch.at(r1, c0) * (1.0f - fc) + patch.at(r1, c1) * fc;
    return top * (1.0f - fr) + bottom * fr;
}

}  // namespace

ReferenceModel::ReferenceModel(int patch_width, int patch_length)
    : patch_width_(patch_width), patch_length_(patch_length) {
    if (patch_width < 1 || patch_length < 1)
        throw std::invalid_argument("ReferenceModel: patch dimensions must be >= 1");
    params_.assign(Layout(patch_width * patch_length).total, 0.0);
}

void ReferenceModel::initialize_weights(std::mt19937& rng) {
    const Layout layout(patch_width_ * patch_length_);
    auto xavier = [&rng](double* begin, std::size_t count, int fan_in, int fan_out) {
        const double r = std::sqrt(6.0 / (fan_in + fan_out));
        std::uniform_real_distribution<double> dist(-r, r);
        for (std::size_t i = 0; i < count; ++i) begin[i] = dist(rng);
    };
    std::fill(params_.begin(), params_.end(), 0.0);
    const int d = layout.input;
    xavier(params_.data() + layout.w1, static_cast<std::size_t>(kHidden1) * d, d, kHidden1);
    xavier(params_.data() + layout.w2, static_cast<std::size_t>(kHidden2) * kHidden1,
           kHidden1, kHidden2);
    xavier(params_.data() + layout.w3, kHidden2, kHidden2, 1);
}

double ReferenceModel::score(const Patch& patch) const {
    if (patch.width != patch_width_ || patch.length != patch_length_)
        throw std::invalid_argument("ReferenceModel: patch dimensions do not match model");
    Activations act;
    return forward(params_, Layout(patch_width_ * patch_length_), patch, act);
}

Classification ReferenceModel::classify(const Patch& patch) const {
    const float s = static_cast<float>(score(patch));
    return {label_from_score(s), s};
}

double ReferenceModel::loss_and_gradient(const Sample& sample, double class_weight,
                                         std::span<double> grad) const {
    if (grad.size() != params_.size())
        throw std::invalid_argument("loss_and_gradient: gradient size mismatch");
    const Layout layout(patch_width_ * patch_length_);
    Activations act;
    const double p = forward(params_, layout, sample.patch, act);
    const double y = sample.label == Label::Foreground ? 1.0 : 0.0;
    const double loss =
        class_weight * (y > 0.5 ? softplus(-act.z) : softplus(act.z));

    const double dz = class_weight * (p - y);
    const double* w2 = params_.data() + layout.w2;
    const double* w3 = params_.data() + layout.w3;
    double* g_w1 = grad.data() + layout.w1;
    double* g_b1 = grad.data() + layout.b1;
    double* g_w2 = grad.data() + layout.w2;
    double* g_b2 = grad.data() + layout.b2;
    double* g_w3 = grad.data() + layout.w3;

    double da2[kHidden2];
    for (int k = 0; k < kHidden2; ++k) {
        g_w3[k] += dz * act.h2[k];
        da2[k] = dz * w3[k] * (1.0 - act.h2[k] * act.h2[k]);
        g_b2[k] += da2[k];
    }
    grad[layout.b3] += dz;

    double da1[kHidden1];
    for (int h = 0; h < kHidden1; ++h) {
        double acc = 0.0;
        for (int k = 0; k < kHidden2; ++k) acc += w2[static_cast<std::size_t>(k) * kHidden1 + h] * da2[k];
        da1[h] = acc * (1.0 - act.h1[h] * act.h1[h]);
        g_b1[h] += da1[h];
    }
    for (int k = 0; k < kHidden2; ++k) {
        double* row = g_w2 + static_cast<std::size_t>(k) * kHidden1;
        for (int h = 0; h < kHidden1; ++h) row[h] += da2[k] * act.h1[h];
    }
    const int d = layout.input;
    for (int h = 0; h < kHidden1; ++h) {
        double* row = g_w1 + static_cast<std::size_t>(h) * d;
        const double s = da1[h];
        for (int i = 0; i < d; ++i) row[i] += s * act.input[i];
    }
    return loss;
}

void ReferenceModel::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open file for writing: " + path);
    const std::uint32_t w = static_cast<std::uint32_t>(patch_width_);
    const std::uint32_t l = static_cast<std::uint32_t>(patch_length_);
    const std::uint64_t count = params_.size();
    out.write(kModelMagic, 4);
    out.write(reinterpret_cast<const char*>(&kModelVersion), 4);
    out.write(reinterpret_cast<const char*>(&w), 4);
    out.write(reinterpret_cast<const char*>(&l), 4);
    out.write(reinterpret_cast<const char*>(&kArchitectureId), 4);
    out.write(reinterpret_cast<const char*>(&count), 8);
    out.write(reinterpret_cast<const char*>(params_.data()),
              static_cast<std::streamsize>(count * sizeof(double)));
    if (!out) throw DataError("model write failed: " + path);
}

ReferenceModel ReferenceModel::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    char magic[4];
    std::uint32_t version = 0, w = 0, l = 0, arch = 0;
    std::uint64_t count = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&w), 4);
    in.read(reinterpret_cast<char*>(&l), 4);
    in.read(reinterpret_cast<char*>(&arch), 4);
    in.read(reinterpret_cast<char*>(&count), 8);
    if (!in || std::memcmp(magic, kModelMagic, 4) != 0)
        throw DataError("not a model file: " + path);
    if (version != kModelVersion)
        throw DataError("unsupported model version " + std::to_string(version) + ": " + path);
    if (arch != kArchitectureId)
        throw DataError("unsupported model architecture id " + std::to_string(arch) + ": " + path);
    if (w < 1 || l < 1 || w > 4096 || l > 4096)
        throw DataError("implausible model patch size: " + path);

    ReferenceModel model(static_cast<int>(w), static_cast<int>(l));
    if (count != model.params_.size())
        throw DataError("model parameter count does not match architecture: " + path);
    in.read(reinterpret_cast<char*>(model.params_.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (!in) throw DataError("truncated model file: " + path);
    return model;
}

ReferenceModel train_classifier(const std::vector<Sample>& samples,
                                const TrainHyperparams& hp,
                                std::vector<double>* epoch_losses) {
    if (samples.empty()) throw std::invalid_argument("train_classifier: empty sample set");
    std::size_t n_pos = 0;
    for (const Sample& s : samples) n_pos += (s.label == Label::Foreground);
    const std::size_t n_neg = samples.size() - n_pos;
    if (n_pos == 0 || n_neg == 0)
        throw std::invalid_argument("train_classifier: need at least one sample of each label");
    if (hp.epochs < 1 || hp.batch_size < 1 || !(hp.learning_rate > 0.0))
        throw std::invalid_argument("train_classifier: invalid hyperparameters");

    const int w = samples[0].patch.width;
    const int l = samples[0].patch.length;
    for (const Sample& s : samples) {
        if (s.patch.width != w || s.patch.length != l)
            throw std::invalid_argument("train_classifier: inconsistent patch dimensions");
    }

    // Inverse-frequency weighting keeps imbalanced anchor draws from biasing
    // the decision threshold.
    const double n = static_cast<double>(samples.size());
    const double weight_pos = n / (2.0 * static_cast<double>(n_pos));
    const double weight_neg = n / (2.0 * static_cast<double>(n_neg));

    ReferenceModel model(w, l);
    std::mt19937 rng(hp.seed);
    model.initialize_weights(rng);
    const Layout layout(w * l);

    std::vector<double>& params = model.parameters();
    std::vector<double> grad(params.size(), 0.0);
    std::vector<double> adam_m(params.size(), 0.0);
    std::vector<double> adam_v(params.size(), 0.0);
    constexpr double beta1 = 0.9, beta2 = 0.999, adam_eps = 1e-8;
    long step = 0;

    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    for (int epoch = 0; epoch < hp.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0.0;

        for (std::size_t begin = 0; begin < order.size(); begin += hp.batch_size) {
            const std::size_t end = std::min(order.size(), begin + hp.batch_size);
            std::fill(grad.begin(), grad.end(), 0.0);
            double batch_loss = 0.0;
            for (std::size_t i = begin; i < end; ++i) {
                const Sample& s = samples[order[i]];
                const double cw = s.label == Label::Foreground ? weight_pos : weight_neg;
                batch_loss += model.loss_and_gradient(s, cw, grad);
            }
            const double inv = 1.0 / static_cast<double>(end - begin);
            if (!std::isfinite(batch_loss))
                throw std::runtime_error("train_classifier: NaN loss at epoch " +
                                         std::to_string(epoch));
            epoch_loss += batch_loss;

            ++step;
            const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step));
            const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step));
            for (std::size_t i = 0; i < params.size(); ++i) {
                double g = grad[i] * inv;
                if (hp.l2 > 0.0 && !layout.is_bias(i)) g += hp.l2 * params[i];
                adam_m[i] = beta1 * adam_m[i] + (1.0 - beta1) * g;
                adam_v[i] = beta2 * adam_v[i] + (1.0 - beta2) * g * g;
                params[i] -= hp.learning_rate * (adam_m[i] / bc1) /
                             (std::sqrt(adam_v[i] / bc2) + adam_eps);
            }
        }
        if (epoch_losses) epoch_losses->push_back(epoch_loss / n);
    }
    return model;
}

std::vector<Sample> augment(const Sample& sample, std::mt19937& rng,
                            const AugmentConfig& config) {
    const Patch& src = sample.patch;
    std::vector<Sample> out;
    out.reserve(3 + std::max(0, config.rotations));
    out.push_back(sample);

    Sample hflip = sample;
    for (int r = 0; r < src.length; ++r)
        for (int c = 0; c < src.width; ++c) hflip.patch.at(r, c) = src.at(r, src.width - 1 - c);
    out.push_back(std::move(hflip));

    Sample vflip = sample;
    for (int r = 0; r < src.length; ++r)
        for (int c = 0; c < src.width; ++c) vflip.patch.at(r, c) = src.at(src.length - 1 - r, c);
    out.push_back(std::move(vflip));

    std::uniform_real_distribution<double> angle_deg(-config.max_rotation_deg,
                                                     config.max_rotation_deg);
    const double cx = (src.width - 1) / 2.0;
    const double cy = (src.length - 1) / 2.0;
    for (int k = 0; k < config.rotations; ++k) {
        const double theta = angle_deg(rng) * std::numbers::pi / 180.0;
        const double cos_t = std::cos(theta);
        const double sin_t = std::sin(theta);
        Sample rotated = sample;
        for (int r = 0; r < src.length; ++r) {
            for (int c = 0; c < src.width; ++c) {
                const double dx = c - cx;
                const double dy = r - cy;
                // Inverse mapping: sample the source at the back-rotated position.
                const double sx = cx + cos_t * dx + sin_t * dy;
                const double sy = cy - sin_t * dx + cos_t * dy;
                rotated.patch.at(r, c) = bilinear_patch(src, sx, sy);
            }
        }
        out.push_back(std::move(rotated));
    }
    return out;
}

}  // namespace tubeseg
