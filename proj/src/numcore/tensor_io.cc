// numcore/tensor_io.cc

// Copyright 2026  The vcamkit authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "vcam/tensor_io.h"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

static_assert(std::endian::native == std::endian::little,
              "container format is little-endian; big-endian hosts need swaps");
static_assert(sizeof(float) == 4, "container format stores 32-bit floats");

namespace vcam::numcore {

namespace {
constexpr char kMagic[4] = {'V', 'C', 'T', '1'};
}

void SaveTensor(const std::string& path, const Tensor<float>& t) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  VCAM_CHECK(f.good(), "cannot open " << path << " for writing");
  f.write(kMagic, 4);
  const uint32_t rank = static_cast<uint32_t>(t.rank());
  f.write(reinterpret_cast<const char*>(&rank), sizeof(rank));
  for (int64_t e : t.shape) {
    const uint64_t ext = static_cast<uint64_t>(e);
    f.write(reinterpret_cast<const char*>(&ext), sizeof(ext));
  }
  f.write(reinterpret_cast<const char*>(t.data.data()),
          static_cast<std::streamsize>(sizeof(float) * t.data.size()));
  VCAM_CHECK(f.good(), "write failed for " << path);
}

Tensor<float> LoadTensor(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  VCAM_CHECK(f.good(), "cannot open " << path);
  char magic[4];
  f.read(magic, 4);
  VCAM_CHECK(f.good() && std::memcmp(magic, kMagic, 4) == 0,
             path << " is not a tensor container file");
  uint32_t rank = 0;
  f.read(reinterpret_cast<char*>(&rank), sizeof(rank));
  VCAM_CHECK(f.good() && rank > 0 && rank <= 8,
             "bad rank " << rank << " in " << path);
  std::vector<int64_t> shape(rank);
  for (uint32_t i = 0; i < rank; ++i) {
    uint64_t ext = 0;
    f.read(reinterpret_cast<char*>(&ext), sizeof(ext));
    VCAM_CHECK(f.good() && ext > 0, "bad extent in " << path);
    shape[i] = static_cast<int64_t>(ext);
  }
  Tensor<float> t(shape);
  f.read(reinterpret_cast<char*>(t.data.data()),
         static_cast<std::streamsize>(sizeof(float) * t.data.size()));
  VCAM_CHECK(f.good(), "truncated tensor payload in " << path);
  return t;
}

}  // namespace vcam::numcore
