#pragma once

#include <string>
#include <vector>

#include "sal/layers.hpp"
#include "sal/rng.hpp"
#include "sal/sampler.hpp"
#include "sal/tensor.hpp"

namespace sal {

struct PgmConfig {
    int64_t n_patches = 4;
    double epsilon = 0.6;
    int64_t loc_size = 64;  // fixed localization resolution (two pools -> /4)
};

/// Ordered bag [I_0, I_1, .., I_N]: the untouched input first, then the N
/// sampled crops resized back to the input extents.
struct PatchBag {
    std::vector<TensorPtr> images;
    std::vector<CropBox> boxes;
};

/// Localization network: a shared conv trunk (64 kernels of 7x7 and 5x5, each
/// followed by a stride-2 max pool) into a 256-wide FC, then N unshared heads
/// regressing 4 raw crop parameters each. Head biases start at zero so the
/// initial boxes sit centered at the minimum-extent constraint's midpoint.
class LocNet {
public:
    LocNet() = default;
    LocNet(const PgmConfig& cfg, Rng& rng);

    /// Resizes the image to the localization resolution and regresses one
    /// constrained CropBox per head; differentiable end to end.
    std::vector<CropBox> forward(const TensorPtr& image) const;

    void append_params(const std::string& prefix, std::vector<NamedTensor>& out) const;

    PgmConfig config;
    Conv2dLayer conv1;  // 3 -> 64, 7x7
    Conv2dLayer conv2;  // 64 -> 64, 5x5
    TensorPtr fc_weight, fc_bias;  // flattened trunk -> 256
    std::vector<TensorPtr> head_weights, head_biases;  // N x (256 -> 4)
};

PatchBag generate_patch_bag(const TensorPtr& image, const std::vector<CropBox>& boxes);

}  // namespace sal
