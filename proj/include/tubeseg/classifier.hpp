#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "tubeseg/patch.hpp"
#include "tubeseg/types.hpp"

namespace tubeseg {

struct Classification {
    Label label = Label::Background;
    float score = 0.0f;  // foreground probability in [0,1]
};

/// Label decision is fixed at the 0.5 threshold: score >= 0.5 is foreground.
inline Label label_from_score(float score) {
    return score >= 0.5f ? Label::Foreground : Label::Background;
}

/// Patch classifier interface. Implementations must be pure: the same patch
/// always yields the same result, and classify must be safe to call from
/// multiple threads.
class PatchClassifier {
public:
    virtual ~PatchClassifier() = default;
    virtual Classification classify(const Patch& patch) const = 0;
};

/// A labeled rectified patch.
struct Sample {
    Patch patch;
    Label label = Label::Background;
};

struct TrainHyperparams {
    double learning_rate = 3e-3;
    int epochs = 10;
    int batch_size = 128;
    double l2 = 1e-5;
    std::uint32_t seed = 1;
};

/// Small fixed dense network over the flattened patch: per-pixel
/// standardization of the input, two tanh layers (16 and 8 units), sigmoid
/// output. The parameter count is a function of the patch size alone.
class ReferenceModel final : public PatchClassifier {
public:
    static constexpr int kHidden1 = 16;
    static constexpr int kHidden2 = 8;
    static constexpr std::uint32_t kArchitectureId = 1;

    ReferenceModel(int patch_width, int patch_length);

    Classification classify(const Patch& patch) const override;
    /// Foreground probability; throws on patch dimension mismatch.
    double score(const Patch& patch) const;

    int patch_width() const { return patch_width_; }
    int patch_length() const { return patch_length_; }
    std::size_t parameter_count() const { return params_.size(); }
    std::vector<double>& parameters() { return params_; }
    const std::vector<double>& parameters() const { return params_; }

    void initialize_weights(std::mt19937& rng);

    /// Weighted binary cross-entropy of one sample plus its gradient,
    /// accumulated into `grad` (which must have parameter_count() entries).
    double loss_and_gradient(const Sample& sample, double class_weight,
                             std::span<double> grad) const;

    /// Versioned little-endian binary blob; byte layout in docs/FORMATS.md.
    void save(const std::string& path) const;
    static ReferenceModel load(const std::string& path);

private:
    int patch_width_ = 0;
    int patch_length_ = 0;
    std::vector<double> params_;
};

/// Trains the reference model by seeded mini-batch Adam on mean binary
/// cross-entropy with inverse-frequency class weighting. Requires at least
/// one sample of each label; aborts with a diagnostic on NaN loss. When
/// given, `epoch_losses` receives the mean training loss of each epoch.
ReferenceModel train_classifier(const std::vector<Sample>& samples,
                                const TrainHyperparams& hyperparams,
                                std::vector<double>* epoch_losses = nullptr);

struct AugmentConfig {
    int rotations = 1;              // rotated copies per sample
    double max_rotation_deg = 5.0;  // angles drawn uniformly from +/- this
};

/// Restricted augmentation: the original, its horizontal flip, its vertical
/// flip (which reverses path direction), and small in-plane rotations with
/// bilinear resampling and border clamping. Labels are preserved. Larger
/// rotations or crops would break the straight-vertical-centerline property
/// of rectified patches, so they are deliberately not offered.
std::vector<Sample> augment(const Sample& sample, std::mt19937& rng,
                            const AugmentConfig& config = {});

}  // namespace tubeseg
