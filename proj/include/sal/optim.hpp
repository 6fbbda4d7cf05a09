#pragma once

#include <cstdint>
#include <vector>

#include "sal/rng.hpp"
#include "sal/tensor.hpp"

namespace sal {

/// Xavier/Glorot uniform draw over [-a, a], a = sqrt(6 / (fan_in + fan_out)).
/// Fans: rank 1 -> n/n; rank 2 [O,D] -> D/O; rank 4 [O,I,kh,kw] -> channels
/// times kernel area on each side.
TensorPtr xavier_init(const Shape& shape, Rng& rng);

/// Per-parameter Adam state; m and v are zero at t = 0 and t advances by one
/// per step.
struct AdamState {
    std::vector<double> m, v;
    int64_t t = 0;
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    static AdamState for_param(const Tensor& param, double lr);
};

/// Bias-corrected Adam update applied in place. Gradients are left untouched;
/// the caller zeroes them between steps.
void adam_step(Tensor& param, AdamState& state);

/// Parameter groups with independent learning rates, stepped together.
class AdamOptimizer {
public:
    void add_group(const std::vector<NamedTensor>& params, double lr);
    void step();
    void zero_grad();
    /// Multiplies every group's learning rate (plateau decay).
    void scale_lr(double factor);
    std::vector<double> group_lrs() const;

private:
    struct Entry {
        TensorPtr param;
        AdamState state;
        size_t group;
    };
    std::vector<Entry> entries_;
    std::vector<double> lrs_;
};

}  // namespace sal
