#pragma once

#include <string>
#include <vector>

#include "sal/layers.hpp"
#include "sal/rng.hpp"
#include "sal/tensor.hpp"

namespace sal {

/// Backbone geometry. Channel widths scale with base_channels; the stage
/// layout (five blocks, pools only in the first three, dilation in the last
/// two) fixes the output stride at 8 for every configuration.
struct BackboneConfig {
    int64_t base_channels = 8;
    int64_t dilation4 = 2;
    int64_t dilation5 = 4;
    int64_t feature_channels = 64;

    void validate() const;
};

/// Saliency feature extractor: VGG-style blocks B1-B3 with pooling, dilated
/// B4/B5 at constant resolution, one extra 3x3 conv, and an inception-style
/// fusion (parallel 1x1/3x3/5x5 branches over B3/B4/B5/extra, concatenated
/// and projected to the feature width).
class Spm {
public:
    Spm() = default;
    Spm(const BackboneConfig& cfg, Rng& rng);

    /// [N,3,H,W] -> [N,F,H/8,W/8]; H and W must be divisible by 8.
    TensorPtr forward(const TensorPtr& image) const;

    void append_params(const std::string& prefix, std::vector<NamedTensor>& out) const;

    BackboneConfig config;
    std::vector<Conv2dLayer> block1, block2, block3, block4, block5;
    Conv2dLayer extra;
    struct FusionBranches {
        Conv2dLayer k1, k3, k5;
    };
    FusionBranches fuse_b3, fuse_b4, fuse_b5, fuse_extra;
    Conv2dLayer proj;
};

/// Stage-1 decode head: two 3x3 conv+relu stages halving the width twice,
/// then a 1x1 conv to a single-channel logit map at 1/8 resolution. Used only
/// to train the backbone; later stages discard it.
class DecodeHead {
public:
    DecodeHead() = default;
    DecodeHead(int64_t feature_channels, Rng& rng);

    TensorPtr forward(const TensorPtr& features) const;
    void append_params(const std::string& prefix, std::vector<NamedTensor>& out) const;

    Conv2dLayer conv1, conv2, conv3;
    int64_t feature_channels = 0;
};

}  // namespace sal
