#pragma once

#include <string>
#include <vector>

#include "sal/config.hpp"
#include "sal/dataset.hpp"
#include "sal/model.hpp"

namespace sal {

/// Rebuilds a model from a full checkpoint (pgm + spm + ram parameters).
Model load_model(const TrainConfig& cfg, const std::vector<uint8_t>& ckpt);

/// Full-pipeline inference on a [3,H,W] image: the final prediction map,
/// pushed through the logistic and bilinearly upsampled back to the input
/// extents. Inputs are zero-padded to multiples of 8 internally.
TensorPtr infer_map(const Model& model, const TensorPtr& image);

/// All N+1 prediction maps at input resolution, in step order.
std::vector<TensorPtr> stepwise_maps(const Model& model, const TensorPtr& image);

/// Compares prediction maps against ground-truth masks by file id and writes
/// a delimited report: one row per image plus a trailing mean row.
std::string evaluate_dirs(const std::string& pred_dir, const std::string& gt_dir);

/// Per-step MAE / max F-beta table over a dataset (the step-wise analysis).
std::string stepwise_report(const Model& model, std::vector<Sample>& data);

}  // namespace sal
