#include "sal/losses.hpp"

#include <cmath>
#include <stdexcept>

#include "sal/ops.hpp"

namespace sal {

TensorPtr bce_loss(const TensorPtr& logits, const TensorPtr& target) {
    if (logits->shape != target->shape)
        throw std::invalid_argument("bce_loss: shape mismatch " + shape_str(logits->shape) +
                                    " vs " + shape_str(target->shape));
    const int64_t n = logits->numel();
    for (int64_t i = 0; i < n; ++i) {
        const double t = target->values[i];
        if (t < 0.0 || t > 1.0)
            throw std::invalid_argument("bce_loss: target outside [0,1]");
    }
    double acc = 0.0;
    for (int64_t i = 0; i < n; ++i) {
        const double x = logits->values[i];
        const double t = target->values[i];
        acc += std::max(x, 0.0) - x * t + std::log1p(std::exp(-std::abs(x)));
    }
    auto out = Tensor::scalar(acc / static_cast<double>(n));
    attach_op(out, {logits, target}, [logits, target, n](Tensor& self) {
        const double g = self.grad[0] / static_cast<double>(n);
        if (logits->needs_grad) {
            logits->ensure_grad();
            for (int64_t i = 0; i < n; ++i) {
                logits->grad[i] += g * (logistic_value(logits->values[i]) - target->values[i]);
            }
        }
        if (target->needs_grad) {
            target->ensure_grad();
            for (int64_t i = 0; i < n; ++i) target->grad[i] -= g * logits->values[i];
        }
    });
    return out;
}

TensorPtr iou_loss(const TensorPtr& probs, const TensorPtr& target, double smoothing) {
    if (probs->shape != target->shape)
        throw std::invalid_argument("iou_loss: shape mismatch " + shape_str(probs->shape) +
                                    " vs " + shape_str(target->shape));
    if (smoothing <= 0.0) throw std::invalid_argument("iou_loss: smoothing must be positive");
    const int64_t n = probs->numel();
    double inter = 0.0, uni = 0.0;
    for (int64_t i = 0; i < n; ++i) {
        const double p = probs->values[i];
        const double t = target->values[i];
        inter += p * t;
        uni += p + t - p * t;
    }
    auto out = Tensor::scalar(1.0 - (inter + smoothing) / (uni + smoothing));
    attach_op(out, {probs, target}, [probs, target, inter, uni, smoothing, n](Tensor& self) {
        const double g = self.grad[0];
        const double is = inter + smoothing;
        const double us = uni + smoothing;
        // d/dp[-(I+s)/(U+s)] with dI/dp = t, dU/dp = 1-t (and symmetrically for t)
        if (probs->needs_grad) {
            probs->ensure_grad();
            for (int64_t i = 0; i < n; ++i) {
                const double t = target->values[i];
                probs->grad[i] += g * (is * (1.0 - t) - us * t) / (us * us);
            }
        }
        if (target->needs_grad) {
            target->ensure_grad();
            for (int64_t i = 0; i < n; ++i) {
                const double p = probs->values[i];
                target->grad[i] += g * (is * (1.0 - p) - us * p) / (us * us);
            }
        }
    });
    return out;
}

TensorPtr stage1_loss(const TensorPtr& logits, const TensorPtr& target, const LossConfig& cfg) {
    if (cfg.lambda1 < 0.0 || cfg.lambda2 < 0.0)
        throw std::invalid_argument("stage1_loss: negative loss weight");
    auto ce = scale(bce_loss(logits, target), cfg.lambda1);
    if (cfg.lambda2 == 0.0) return ce;
    auto iou = iou_loss(logistic(logits), target, cfg.smoothing);
    return add(ce, scale(iou, cfg.lambda2));
}

TensorPtr recurrent_loss(const std::vector<TensorPtr>& pred_logits, const TensorPtr& target,
                         double k) {
    if (pred_logits.empty()) throw std::invalid_argument("recurrent_loss: empty prediction list");
    if (k < 1.0) throw std::invalid_argument("recurrent_loss: k must be >= 1");
    const int64_t last = static_cast<int64_t>(pred_logits.size());  // N + 1 maps
    const double norm = std::pow(k, static_cast<double>(last));
    TensorPtr total;
    for (int64_t i = 0; i < last; ++i) {
        auto term = scale(bce_loss(pred_logits[static_cast<size_t>(i)], target),
                          std::pow(k, static_cast<double>(i + 1)) / norm);
        total = total ? add(total, term) : term;
    }
    return total;
}

}  // namespace sal
