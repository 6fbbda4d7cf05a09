#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sal/config.hpp"
#include "sal/dataset.hpp"
#include "sal/model.hpp"

namespace sal {

struct EpochRow {
    int64_t epoch;
    double train_loss;
    double val_mae;
    std::vector<double> lrs;
    double seconds;
};

struct RunLog {
    std::vector<EpochRow> rows;
    std::string to_text() const;
};

struct StageResult {
    std::vector<uint8_t> checkpoint;  // best-validation snapshot
    RunLog log;
    double best_val_mae = 0.0;
};

struct SplitIdx {
    std::vector<size_t> train, val;
};

/// Deterministic train/validation split shared by all stages: a seeded
/// shuffle, holding out min(val_count, n/2) samples.
SplitIdx split_train_val(size_t n, const TrainConfig& cfg);

/// Stage 1: backbone + decode head under the combined CE/IoU loss, batch
/// training with validation-plateau lr decay. The checkpoint holds every
/// spm.* and head.* parameter.
StageResult train_stage1(std::vector<Sample>& data, const TrainConfig& cfg);

/// Stage 2: full pipeline with the backbone loaded from the stage-1
/// checkpoint and frozen; localization and recurrent modules train under the
/// exponentially weighted loss with per-group learning rates.
StageResult train_stage2(std::vector<Sample>& data, const TrainConfig& cfg,
                         const std::vector<uint8_t>& spm_ckpt);

/// Stage 3: end-to-end fine-tuning from a stage-2 checkpoint; the backbone
/// joins at the recurrent module's learning rate.
StageResult train_stage3(std::vector<Sample>& data, const TrainConfig& cfg,
                         const std::vector<uint8_t>& full_ckpt);

/// Full-resolution MAE of the final prediction over the given samples.
double validate_model(const Model& model, std::vector<Sample>& data,
                      const std::vector<size_t>& idx);

}  // namespace sal
