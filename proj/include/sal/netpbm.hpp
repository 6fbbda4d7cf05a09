#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sal/tensor.hpp"

namespace sal {

// Binary Netpbm, maxval 255 only. Images are P6 <-> [3,H,W] tensors in [0,1];
// single-channel maps are P5 <-> [H,W]. Writers quantize by round(v*255)
// clamped to [0,255].

TensorPtr read_ppm(const std::vector<uint8_t>& bytes);
TensorPtr read_pgm(const std::vector<uint8_t>& bytes);
std::vector<uint8_t> write_ppm(const Tensor& image);
std::vector<uint8_t> write_pgm(const Tensor& map);

std::vector<uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, const std::vector<uint8_t>& bytes);

}  // namespace sal
