#pragma once

#include <string>
#include <vector>

#include "sal/rng.hpp"
#include "sal/tensor.hpp"

namespace sal {

/// Convolutional GRU cell: 5x5 gate convolutions over the input (W) and the
/// hidden state (U), with per-channel biases. Padding preserves spatial
/// extents, so the hidden state keeps its resolution across steps.
struct ConvGruCell {
    TensorPtr w_z, u_z, b_z;
    TensorPtr w_r, u_r, b_r;
    TensorPtr w_h, u_h, b_h;
    int64_t in_channels = 0;
    int64_t hidden_channels = 0;

    ConvGruCell() = default;
    ConvGruCell(int64_t in_c, int64_t hidden_c, Rng& rng);

    void append_params(const std::string& prefix, std::vector<NamedTensor>& out) const;
};

/// One GRU update: z and r gates through the logistic, tanh candidate, and
/// the convex blend h_t = (1-z) o h_prev + z o candidate.
TensorPtr convgru_step(const ConvGruCell& cell, const TensorPtr& x_t, const TensorPtr& h_prev);

/// Recurrent attention module: stacked encoder/decoder ConvGRUs consuming the
/// ordered feature bag (full-image features first) and a 1x1 output head
/// emitting one saliency logit map per step.
class Ram {
public:
    Ram() = default;
    Ram(int64_t feature_channels, int64_t hidden_channels, Rng& rng);

    /// Runs the recurrence over [F_0 .. F_N] from zero hidden states and
    /// returns the N+1 logit maps in step order.
    std::vector<TensorPtr> rollout(const std::vector<TensorPtr>& features) const;

    void append_params(const std::string& prefix, std::vector<NamedTensor>& out) const;

    ConvGruCell encoder;
    ConvGruCell decoder;
    TensorPtr head_weight;  // [1, hidden, 1, 1]
    TensorPtr head_bias;
};

}  // namespace sal
