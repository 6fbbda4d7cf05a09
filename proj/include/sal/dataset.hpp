#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sal/rng.hpp"
#include "sal/tensor.hpp"

namespace sal {

/// One image/mask pair. Images are [3,H,W] in [0,1]; masks are [H,W] and
/// strictly binary. mask_small caches the 1/8-resolution soft target used by
/// the losses and is filled on first use.
struct Sample {
    TensorPtr image;
    TensorPtr mask;
    std::string id;
    TensorPtr mask_small;
};

/// Area-average downsample of an [H,W] map by an integer factor.
TensorPtr downsample_area(const Tensor& map, int64_t factor);

/// Lazily computed 1/8 soft mask for loss supervision.
const TensorPtr& mask_small_of(Sample& sample);

/// Reads `dir/images/<id>.ppm` + `dir/masks/<id>.pgm`, sorted by id. Masks
/// are binarized at 0.5; image and mask are zero-padded on the bottom/right
/// to multiples of 8.
std::vector<Sample> load_dataset(const std::string& dir);

/// Writes the dataset directory layout consumed by load_dataset.
void write_dataset(const std::string& dir, const std::vector<Sample>& samples);

/// Seeded permutation split into batches; the final short batch is kept.
std::vector<std::vector<size_t>> batch_iter(size_t dataset_size, int64_t batch_size, Rng& rng,
                                            bool shuffle);

/// Stacks samples into a [B,3,H,W] batch (extents must match).
TensorPtr stack_images(const std::vector<Sample>& samples, const std::vector<size_t>& idx);

/// Stacks 1/8 soft masks into [B,1,H/8,W/8].
TensorPtr stack_masks_small(std::vector<Sample>& samples, const std::vector<size_t>& idx);

/// Zero-pads a [3,H,W] image (or [H,W] map) on the bottom/right so both
/// spatial extents are multiples of `multiple`.
TensorPtr pad_to_multiple(const Tensor& t, int64_t multiple);

}  // namespace sal
