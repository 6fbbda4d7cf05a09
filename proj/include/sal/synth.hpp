#pragma once

#include <cstdint>
#include <vector>

#include "sal/dataset.hpp"

namespace sal {

/// Synthetic salient-object scenes: 1-3 high-contrast shapes with exact
/// masks over a textured background, plus low-contrast distractor shapes,
/// and optional soft shadows. Output is a pure function of the config.
struct SynthConfig {
    uint64_t seed = 1;
    int64_t count = 200;
    int64_t size = 64;
    double clutter_density = 0.6;  // background texture strength, [0,1]
    int distractors_min = 1;
    int distractors_max = 3;
    double shadow_prob = 0.5;
    double contrast_min = 0.35;  // salient shape vs background mean
    double contrast_max = 0.85;
};

/// One sample plus its rasterization layers (pixel-level salient/distractor
/// coverage), exposed so tests can check the layering contract.
struct SynthSample {
    Sample sample;
    std::vector<uint8_t> salient_coverage;
    std::vector<uint8_t> distractor_coverage;
};

SynthSample synth_generate_one(const SynthConfig& cfg, int64_t index);

std::vector<Sample> synth_generate(const SynthConfig& cfg);

}  // namespace sal
