#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tubeseg/classifier.hpp"
#include "tubeseg/minpath.hpp"
#include "tubeseg/sampler.hpp"
#include "tubeseg/types.hpp"

namespace tubeseg {

/// One training image with its labels and solver start point. `ignore`
/// marks pixels excluded from negative anchoring (pseudo-mask mode).
struct TrainingExample {
    GridImage image;
    BinaryMask ground_truth;
    PixelCoord start;
    std::optional<BinaryMask> ignore;
};

struct IterationRecord {
    int iteration = 0;        // 1-based
    double val_dice = 0.0;    // mean validation Dice of this iteration's model
    std::size_t n_pos = 0;    // samples the model was trained on
    std::size_t n_neg = 0;
    std::string model_file;   // empty when no run directory was given
};

struct TrainRun {
    std::vector<IterationRecord> iterations;
    int best_index = 0;  // into `iterations`: maximum Dice, earliest on ties
};

struct TrainConfig {
    int max_iterations = 5;
    SamplerConfig sampler;
    TrainHyperparams classifier;
    InferenceParams inference;
    bool augmentation = true;
    AugmentConfig augment;
    std::string run_directory;  // empty = keep everything in memory
    int threads = 1;            // parallel per-image solver runs

    void validate() const;
};

/// Stopping rule of the iterative scheme: continue only while validation
/// Dice strictly increases.
class DiceStoppingRule {
public:
    /// Records one validation score; returns true when the loop may continue.
    bool improved(double dice_current) {
        if (dice_current > dice_previous_) {
            dice_previous_ = dice_current;
            return true;
        }
        return false;
    }

private:
    double dice_previous_ = 0.0;
};

/// Index of the best iteration: maximum validation Dice, earliest on ties.
int select_best_iteration(const std::vector<IterationRecord>& records);

/// Iterative training: iteration 0 samples every training image through the
/// ground-truth graph; each main iteration trains the classifier from
/// scratch on the pooled samples, re-runs the solver on the training images
/// to draw fresh samples, and validates by mean Dice. Stops after
/// `max_iterations` passes or at the first non-increase of validation Dice.
/// Ground-truth masks are never modified. Returns the snapshot with the best
/// validation Dice together with the per-iteration records.
std::pair<ReferenceModel, TrainRun> iterative_train(
    const std::vector<TrainingExample>& train_set,
    const std::vector<TrainingExample>& val_set, const TrainConfig& config);

}  // namespace tubeseg
