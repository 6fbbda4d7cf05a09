#pragma once

#include <vector>

#include "sal/config.hpp"
#include "sal/pgm.hpp"
#include "sal/ram.hpp"
#include "sal/spm.hpp"

namespace sal {

/// The full pipeline: localization trunk + heads, saliency backbone, and the
/// recurrent aggregator. Construction draws every weight from the seeded rng
/// in a fixed order, so same seed means bit-identical initialization.
struct Model {
    LocNet pgm;
    Spm spm;
    Ram ram;

    Model() = default;
    Model(const TrainConfig& cfg, Rng& rng);

    std::vector<NamedTensor> parameters() const;
    std::vector<NamedTensor> pgm_parameters() const;
    std::vector<NamedTensor> spm_parameters() const;
    std::vector<NamedTensor> ram_parameters() const;

    /// Boxes -> patch bag -> per-patch features -> recurrent logit maps.
    std::vector<TensorPtr> forward(const TensorPtr& image) const;
};

/// Stage-1 trainee: backbone plus the temporary decode head.
struct Stage1Model {
    Spm spm;
    DecodeHead head;

    Stage1Model() = default;
    Stage1Model(const TrainConfig& cfg, Rng& rng);

    std::vector<NamedTensor> parameters() const;
    TensorPtr forward(const TensorPtr& images) const;
};

BackboneConfig backbone_config(const TrainConfig& cfg);
PgmConfig pgm_config(const TrainConfig& cfg);

}  // namespace sal
