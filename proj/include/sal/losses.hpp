#pragma once

#include <vector>

#include "sal/tensor.hpp"

namespace sal {

struct LossConfig {
    double lambda1 = 1.0;  // cross-entropy weight
    double lambda2 = 1.0;  // IoU weight
    double k = 2.0;        // exponential base for the recurrent loss
    double smoothing = 1e-6;
};

/// Mean sigmoid cross-entropy over all elements, computed in the stable
/// log-sum-exp form; targets may be soft values in [0,1].
TensorPtr bce_loss(const TensorPtr& logits, const TensorPtr& target);

/// Soft-IoU loss 1 - (I+s)/(U+s) with I = sum(p*t), U = sum(p+t-p*t);
/// differentiable in the probabilities.
TensorPtr iou_loss(const TensorPtr& probs, const TensorPtr& target, double smoothing = 1e-6);

/// lambda1 * CE(logits, target) + lambda2 * IoU(sigmoid(logits), target).
TensorPtr stage1_loss(const TensorPtr& logits, const TensorPtr& target, const LossConfig& cfg);

/// Exponentially weighted recurrent loss over the ordered prediction maps:
/// (1/k^(N+1)) * sum_i k^(i+1) * CE_i.
TensorPtr recurrent_loss(const std::vector<TensorPtr>& pred_logits, const TensorPtr& target,
                         double k);

}  // namespace sal
