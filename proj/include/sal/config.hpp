#pragma once

#include <cstdint>
#include <string>

namespace sal {

/// Training/inference configuration. Defaults are the desk-scale profile
/// (64x64 images, slim channel widths, short schedules) so the full run
/// finishes on one CPU core; the paper-scale schedule is reachable by
/// overriding epochs, widths, and sizes in a config file.
struct TrainConfig {
    uint64_t seed = 1;

    // architecture
    int64_t n_patches = 4;
    double epsilon = 0.6;
    int64_t image_size = 64;
    int64_t loc_size = 64;
    int64_t base_channels = 8;
    int64_t feature_channels = 64;
    int64_t hidden_channels = 64;
    int64_t dilation4 = 2;
    int64_t dilation5 = 4;

    // losses
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    double k = 2.0;
    double smoothing = 1e-6;

    // schedules
    double stage1_lr = 1e-5;
    int64_t stage1_batch = 10;
    int64_t stage1_epochs = 4;
    double stage2_lr_pgm = 1e-4;
    double stage2_lr_ram = 5e-6;
    int64_t stage2_batch = 1;
    int64_t stage2_epochs = 4;
    double stage3_lr_spm = 5e-6;
    int64_t stage3_epochs = 2;

    // validation-plateau learning-rate decay
    double lr_decay_factor = 0.5;
    int64_t lr_patience = 2;
    double lr_min_delta = 1e-4;
    int64_t val_count = 20;

    void validate() const;
};

/// Parses flat `key = value` text ('#' comments allowed); unknown keys are
/// rejected.
TrainConfig parse_config(const std::string& text);

TrainConfig load_config_file(const std::string& path);

}  // namespace sal
