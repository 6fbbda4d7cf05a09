#pragma once

#include <cstdint>
#include <vector>

#include "sal/tensor.hpp"

namespace sal {

enum class CkptDType : uint8_t { F32 = 0, F64 = 1 };

/// Serializes named tensors to the fixed binary layout:
/// magic "SALCKPT1", u32le record count, then per record a u16le name length
/// and name bytes, u8 rank, u32le extents, a u8 element-type code
/// (0 = f32, 1 = f64), and the little-endian raw values.
std::vector<uint8_t> save_checkpoint(const std::vector<NamedTensor>& tensors,
                                     CkptDType dtype = CkptDType::F64);

std::vector<NamedTensor> load_checkpoint(const std::vector<uint8_t>& bytes);

/// Copies checkpoint records into matching parameters by name. Every
/// parameter must be present with the right shape; extra records (such as a
/// stage-1 decode head) are ignored.
void load_into_params(const std::vector<NamedTensor>& params,
                      const std::vector<NamedTensor>& records);

}  // namespace sal
