#pragma once

#include <cstdint>

#include "sal/tensor.hpp"

namespace sal {

/// Normalized crop rectangle. coords is a [4] tensor (x1, y1, x2, y2) that
/// stays linked to the differentiation graph, so gradients flow back to the
/// raw localization outputs.
struct CropBox {
    TensorPtr coords;

    double x1() const { return coords->values[0]; }
    double y1() const { return coords->values[1]; }
    double x2() const { return coords->values[2]; }
    double y2() const { return coords->values[3]; }
};

/// Smooth reparameterization of a raw 4-vector onto the constraint set
/// x2-x1 >= eps, y2-y1 >= eps: width/height go through a logistic squashed
/// to [eps, 1], and the top-left corner through a logistic scaled by the
/// remaining slack. Every raw input lands inside the constraints.
CropBox crop_from_raw(const TensorPtr& raw, double epsilon);

/// Per-output-pixel source coordinates in continuous pixel space of the
/// source image; coords is [2, out_h, out_w] with channel 0 = x, 1 = y.
struct SamplingGrid {
    TensorPtr coords;
    int64_t src_h = 0;
    int64_t src_w = 0;
};

/// Align-corners map of the output lattice onto the box's sub-rectangle,
/// differentiable in the box coordinates.
SamplingGrid make_grid(const CropBox& box, int64_t out_h, int64_t out_w, int64_t src_h,
                       int64_t src_w);

/// Bilinear sampling of an NCHW image at the grid's coordinates;
/// differentiable in both the image and the grid. Out-of-range coordinates
/// are clamped to the border first (their grid gradient is zero).
TensorPtr grid_sample_bilinear(const TensorPtr& image, const SamplingGrid& grid);

}  // namespace sal
