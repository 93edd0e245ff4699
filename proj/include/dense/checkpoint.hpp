#pragma once

#include <string>

#include "dense/model.hpp"

// Binary checkpoint layout (little-endian), documented in the README:
//   bytes 0..7   magic "DENSEKG\0"
//   u32          format version (currently 1)
//   u32          flags, bit 0 = scaling enabled
//   i64, i64, i64  entity count, relation count, unit count k
//   f64 x (E*k*3)  entity table, row-major
//   f64 x (R*k*4)  relation table, row-major, (a, b, c, d) per unit

namespace dense {

void save_checkpoint(const ModelParams& params, const std::string& path);

ModelParams load_checkpoint(const std::string& path);

}  // namespace dense
