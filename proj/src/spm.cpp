#include "sal/spm.hpp"

#include <stdexcept>

#include "sal/ops.hpp"

namespace sal {

void BackboneConfig::validate() const {
    if (base_channels < 1) throw std::invalid_argument("spm: base_channels must be positive");
    if (dilation4 < 1 || dilation5 < 1) throw std::invalid_argument("spm: dilations must be >= 1");
    if (feature_channels < 4 || feature_channels % 4 != 0)
        throw std::invalid_argument("spm: feature_channels must be a positive multiple of 4");
}

Spm::Spm(const BackboneConfig& cfg, Rng& rng) : config(cfg) {
    cfg.validate();
    const int64_t c = cfg.base_channels;
    block1 = {conv_layer(3, c, 3, 1, 1, rng), conv_layer(c, c, 3, 1, 1, rng)};
    block2 = {conv_layer(c, 2 * c, 3, 1, 1, rng), conv_layer(2 * c, 2 * c, 3, 1, 1, rng)};
    block3 = {conv_layer(2 * c, 4 * c, 3, 1, 1, rng), conv_layer(4 * c, 4 * c, 3, 1, 1, rng),
              conv_layer(4 * c, 4 * c, 3, 1, 1, rng)};
    const int64_t d4 = cfg.dilation4, d5 = cfg.dilation5;
    block4 = {conv_layer(4 * c, 8 * c, 3, d4, d4, rng), conv_layer(8 * c, 8 * c, 3, d4, d4, rng),
              conv_layer(8 * c, 8 * c, 3, d4, d4, rng)};
    block5 = {conv_layer(8 * c, 8 * c, 3, d5, d5, rng), conv_layer(8 * c, 8 * c, 3, d5, d5, rng),
              conv_layer(8 * c, 8 * c, 3, d5, d5, rng)};
    extra = conv_layer(8 * c, 8 * c, 3, 1, 1, rng);

    const int64_t branch = cfg.feature_channels / 4;
    auto branches = [&](int64_t in_c) {
        FusionBranches fb;
        fb.k1 = conv_layer(in_c, branch, 1, 0, 1, rng);
        fb.k3 = conv_layer(in_c, branch, 3, 1, 1, rng);
        fb.k5 = conv_layer(in_c, branch, 5, 2, 1, rng);
        return fb;
    };
    fuse_b3 = branches(4 * c);
    fuse_b4 = branches(8 * c);
    fuse_b5 = branches(8 * c);
    fuse_extra = branches(8 * c);
    proj = conv_layer(12 * branch, cfg.feature_channels, 1, 0, 1, rng);
}

TensorPtr Spm::forward(const TensorPtr& image) const {
    if (image->shape.size() != 4 || image->shape[1] != 3)
        throw std::invalid_argument("spm: expected a [N,3,H,W] image, got " +
                                    shape_str(image->shape));
    if (image->shape[2] % 8 != 0 || image->shape[3] % 8 != 0)
        throw std::invalid_argument("spm: spatial extents must be divisible by 8, got " +
                                    shape_str(image->shape));
    auto run_block = [](const std::vector<Conv2dLayer>& block, TensorPtr x) {
        for (const auto& layer : block) x = relu(layer(x));
        return x;
    };
    auto x = maxpool2(run_block(block1, image));
    x = maxpool2(run_block(block2, x));
    auto b3 = maxpool2(run_block(block3, x));
    auto b4 = run_block(block4, b3);
    auto b5 = run_block(block5, b4);
    auto ex = relu(extra(b5));

    auto fan_out = [](const FusionBranches& fb, const TensorPtr& src) {
        return std::vector<TensorPtr>{relu(fb.k1(src)), relu(fb.k3(src)), relu(fb.k5(src))};
    };
    std::vector<TensorPtr> fused;
    for (const auto& [fb, src] : {std::pair{&fuse_b3, &b3}, {&fuse_b4, &b4},
                                  {&fuse_b5, &b5}, {&fuse_extra, &ex}}) {
        for (auto& t : fan_out(*fb, *src)) fused.push_back(std::move(t));
    }
    return relu(proj(concat_channels(fused)));
}

void Spm::append_params(const std::string& prefix, std::vector<NamedTensor>& out) const {
    auto block = [&](const char* name, const std::vector<Conv2dLayer>& layers) {
        for (size_t i = 0; i < layers.size(); ++i)
            layers[i].append_params(prefix + "." + name + "." + std::to_string(i), out);
    };
    block("b1", block1);
    block("b2", block2);
    block("b3", block3);
    block("b4", block4);
    block("b5", block5);
    extra.append_params(prefix + ".extra", out);
    auto fuse = [&](const char* name, const FusionBranches& fb) {
        fb.k1.append_params(prefix + ".fuse." + name + ".k1", out);
        fb.k3.append_params(prefix + ".fuse." + name + ".k3", out);
        fb.k5.append_params(prefix + ".fuse." + name + ".k5", out);
    };
    fuse("b3", fuse_b3);
    fuse("b4", fuse_b4);
    fuse("b5", fuse_b5);
    fuse("extra", fuse_extra);
    proj.append_params(prefix + ".fuse.proj", out);
}

DecodeHead::DecodeHead(int64_t feature_channels_, Rng& rng) : feature_channels(feature_channels_) {
    if (feature_channels < 4 || feature_channels % 4 != 0)
        throw std::invalid_argument("decode_head: feature channels must be a multiple of 4");
    conv1 = conv_layer(feature_channels, feature_channels / 2, 3, 1, 1, rng);
    conv2 = conv_layer(feature_channels / 2, feature_channels / 4, 3, 1, 1, rng);
    conv3 = conv_layer(feature_channels / 4, 1, 1, 0, 1, rng);
}

TensorPtr DecodeHead::forward(const TensorPtr& features) const {
    if (features->shape.size() != 4 || features->shape[1] != feature_channels)
        throw std::invalid_argument("decode_head: channel mismatch, got " +
                                    shape_str(features->shape));
    return conv3(relu(conv2(relu(conv1(features)))));
}

void DecodeHead::append_params(const std::string& prefix, std::vector<NamedTensor>& out) const {
    conv1.append_params(prefix + ".0", out);
    conv2.append_params(prefix + ".1", out);
    conv3.append_params(prefix + ".2", out);
}

}  // namespace sal
