#include "sal/model.hpp"

namespace sal {

BackboneConfig backbone_config(const TrainConfig& cfg) {
    BackboneConfig bc;
    bc.base_channels = cfg.base_channels;
    bc.dilation4 = cfg.dilation4;
    bc.dilation5 = cfg.dilation5;
    bc.feature_channels = cfg.feature_channels;
    return bc;
}

PgmConfig pgm_config(const TrainConfig& cfg) {
    PgmConfig pc;
    pc.n_patches = cfg.n_patches;
    pc.epsilon = cfg.epsilon;
    pc.loc_size = cfg.loc_size;
    return pc;
}

Model::Model(const TrainConfig& cfg, Rng& rng)
    : pgm(pgm_config(cfg), rng),
      spm(backbone_config(cfg), rng),
      ram(cfg.feature_channels, cfg.hidden_channels, rng) {}

std::vector<NamedTensor> Model::parameters() const {
    std::vector<NamedTensor> out;
    pgm.append_params("pgm", out);
    spm.append_params("spm", out);
    ram.append_params("ram", out);
    return out;
}

std::vector<NamedTensor> Model::pgm_parameters() const {
    std::vector<NamedTensor> out;
    pgm.append_params("pgm", out);
    return out;
}

std::vector<NamedTensor> Model::spm_parameters() const {
    std::vector<NamedTensor> out;
    spm.append_params("spm", out);
    return out;
}

std::vector<NamedTensor> Model::ram_parameters() const {
    std::vector<NamedTensor> out;
    ram.append_params("ram", out);
    return out;
}

std::vector<TensorPtr> Model::forward(const TensorPtr& image) const {
    const auto boxes = pgm.forward(image);
    const auto bag = generate_patch_bag(image, boxes);
    std::vector<TensorPtr> features;
    features.reserve(bag.images.size());
    for (const auto& patch : bag.images) features.push_back(spm.forward(patch));
    return ram.rollout(features);
}

Stage1Model::Stage1Model(const TrainConfig& cfg, Rng& rng)
    : spm(backbone_config(cfg), rng), head(cfg.feature_channels, rng) {}

std::vector<NamedTensor> Stage1Model::parameters() const {
    std::vector<NamedTensor> out;
    spm.append_params("spm", out);
    head.append_params("head", out);
    return out;
}

TensorPtr Stage1Model::forward(const TensorPtr& images) const {
    return head.forward(spm.forward(images));
}

}  // namespace sal
