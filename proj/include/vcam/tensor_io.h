// vcam/tensor_io.h

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

#ifndef VCAM_TENSOR_IO_H_
#define VCAM_TENSOR_IO_H_

#include <string>

#include "vcam/tensor.h"

namespace vcam::numcore {

// Tensor container file: magic "VCT1", u32 rank, rank x u64 extents, then
// little-endian 32-bit floats in row-major order. Used for checkpoints,
// corpus payloads and attention-map export.
void SaveTensor(const std::string& path, const Tensor<float>& t);
Tensor<float> LoadTensor(const std::string& path);

}  // namespace vcam::numcore

#endif  // VCAM_TENSOR_IO_H_
