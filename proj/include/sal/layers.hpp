#pragma once

#include <string>
#include <vector>

#include "sal/ops.hpp"
#include "sal/optim.hpp"
#include "sal/rng.hpp"
#include "sal/tensor.hpp"

namespace sal {

/// Convolution layer with Xavier weights and zero bias.
struct Conv2dLayer {
    TensorPtr weight;
    TensorPtr bias;
    int64_t padding = 0;
    int64_t dilation = 1;

    TensorPtr operator()(const TensorPtr& x) const {
        return conv2d(x, weight, bias, 1, padding, dilation);
    }

    void append_params(const std::string& prefix, std::vector<NamedTensor>& out) const {
        out.push_back({prefix + ".weight", weight});
        out.push_back({prefix + ".bias", bias});
    }
};

inline Conv2dLayer conv_layer(int64_t in_c, int64_t out_c, int64_t k, int64_t padding,
                              int64_t dilation, Rng& rng) {
    Conv2dLayer layer;
    layer.weight = xavier_init({out_c, in_c, k, k}, rng);
    layer.bias = Tensor::zeros({out_c});
    layer.padding = padding;
    layer.dilation = dilation;
    return layer;
}

inline void set_trainable_all(const std::vector<NamedTensor>& params, bool on) {
    for (const auto& p : params) p.tensor->set_trainable(on);
}

}  // namespace sal
