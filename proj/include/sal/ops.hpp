#pragma once

#include <cstdint>
#include <vector>

#include "sal/tensor.hpp"

namespace sal {

enum class Act { Logistic, Tanh, Relu };

// Elementwise and reduction primitives. Binary ops require identical shapes;
// there is no broadcasting.
TensorPtr add(const TensorPtr& a, const TensorPtr& b);
TensorPtr sub(const TensorPtr& a, const TensorPtr& b);
TensorPtr mul(const TensorPtr& a, const TensorPtr& b);
TensorPtr scale(const TensorPtr& a, double c);
TensorPtr add_scalar(const TensorPtr& a, double c);
TensorPtr one_minus(const TensorPtr& a);
TensorPtr sum(const TensorPtr& a);
TensorPtr mean(const TensorPtr& a);

TensorPtr pointwise_activation(const TensorPtr& a, Act kind);
TensorPtr logistic(const TensorPtr& a);
TensorPtr tanh_act(const TensorPtr& a);
TensorPtr relu(const TensorPtr& a);

/// Same data, new shape (element counts must match).
TensorPtr reshape(const TensorPtr& a, Shape shape);

/// Concatenates NCHW tensors along the channel axis.
TensorPtr concat_channels(const std::vector<TensorPtr>& parts);

/// Cross-correlation with zero padding. input [N,I,H,W], weight [O,I,kh,kw],
/// bias [O] or null. Differentiable in input, weight, and bias.
TensorPtr conv2d(const TensorPtr& input, const TensorPtr& weight, const TensorPtr& bias,
                 int64_t stride = 1, int64_t padding = 0, int64_t dilation = 1);

/// 2x2 max pooling with stride 2; odd trailing rows/columns are dropped.
/// Backward routes to the argmax (first occurrence in row-major order).
TensorPtr maxpool2(const TensorPtr& input);

/// Affine map: input [N,D], weight [O,D], bias [O] -> [N,O].
TensorPtr fully_connected(const TensorPtr& input, const TensorPtr& weight, const TensorPtr& bias);

/// Align-corners bilinear interpolation of an NCHW tensor to (out_h, out_w).
TensorPtr bilinear_resize(const TensorPtr& input, int64_t out_h, int64_t out_w);

double logistic_value(double x);

}  // namespace sal
