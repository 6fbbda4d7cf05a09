#include "sal/pgm.hpp"

#include <stdexcept>

#include "sal/ops.hpp"

namespace sal {

LocNet::LocNet(const PgmConfig& cfg, Rng& rng) : config(cfg) {
    if (cfg.n_patches < 1) throw std::invalid_argument("locnet: need at least one patch head");
    if (cfg.loc_size < 8 || cfg.loc_size % 4 != 0)
        throw std::invalid_argument("locnet: localization size must be a multiple of 4, >= 8");
    conv1 = conv_layer(3, 64, 7, 3, 1, rng);
    conv2 = conv_layer(64, 64, 5, 2, 1, rng);
    const int64_t flat = 64 * (cfg.loc_size / 4) * (cfg.loc_size / 4);
    fc_weight = xavier_init({256, flat}, rng);
    fc_bias = Tensor::zeros({256});
    for (int64_t i = 0; i < cfg.n_patches; ++i) {
        head_weights.push_back(xavier_init({4, 256}, rng));
        head_biases.push_back(Tensor::zeros({4}));
    }
}

std::vector<CropBox> LocNet::forward(const TensorPtr& image) const {
    if (image->shape.size() != 4 || image->shape[1] != 3)
        throw std::invalid_argument("locnet: expected a [1,3,H,W] image, got " +
                                    shape_str(image->shape));
    if (image->shape[0] != 1)
        throw std::invalid_argument("locnet: crop regression runs one image at a time");
    auto x = bilinear_resize(image, config.loc_size, config.loc_size);
    x = maxpool2(relu(conv1(x)));
    x = maxpool2(relu(conv2(x)));
    x = reshape(x, {image->shape[0], x->numel() / image->shape[0]});
    auto trunk = relu(fully_connected(x, fc_weight, fc_bias));
    std::vector<CropBox> boxes;
    boxes.reserve(head_weights.size());
    for (size_t i = 0; i < head_weights.size(); ++i) {
        auto raw = reshape(fully_connected(trunk, head_weights[i], head_biases[i]), {4});
        boxes.push_back(crop_from_raw(raw, config.epsilon));
    }
    return boxes;
}

void LocNet::append_params(const std::string& prefix, std::vector<NamedTensor>& out) const {
    conv1.append_params(prefix + ".conv1", out);
    conv2.append_params(prefix + ".conv2", out);
    out.push_back({prefix + ".fc.weight", fc_weight});
    out.push_back({prefix + ".fc.bias", fc_bias});
    for (size_t i = 0; i < head_weights.size(); ++i) {
        out.push_back({prefix + ".head" + std::to_string(i) + ".weight", head_weights[i]});
        out.push_back({prefix + ".head" + std::to_string(i) + ".bias", head_biases[i]});
    }
}

PatchBag generate_patch_bag(const TensorPtr& image, const std::vector<CropBox>& boxes) {
    if (image->shape.size() != 4)
        throw std::invalid_argument("generate_patch_bag: image must be NCHW");
    const int64_t h = image->shape[2], w = image->shape[3];
    PatchBag bag;
    bag.images.push_back(image);
    bag.boxes = boxes;
    for (const auto& box : boxes) {
        bag.images.push_back(grid_sample_bilinear(image, make_grid(box, h, w, h, w)));
    }
    return bag;
}

}  // namespace sal
