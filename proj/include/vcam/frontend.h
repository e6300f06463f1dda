// vcam/frontend.h

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

#ifndef VCAM_FRONTEND_H_
#define VCAM_FRONTEND_H_

#include <random>
#include <string>
#include <vector>

#include "vcam/ops.h"
#include "vcam/params.h"

// Feature front-ends. Audio: log(1+x) compression and 3-frame stacking,
// dropping the leftover raw frames. Video: a factorized spatial/temporal
// convolution stack producing one 512-dim vector per stacked-audio time step.
// Both apply the same divide-by-3 remainder rule, so row counts always agree.

namespace vcam::frontend {

// Stacked rows: floor(F / 3).
inline int64_t StackedFrames(int64_t raw_frames) { return raw_frames / 3; }

// Raw-rate indices sampled by the temporal subsampling (triplet centers).
std::vector<int64_t> SubsampleIndices(int64_t raw_frames);

// raw [F x B] energies -> [floor(F/3) x 3B] features. Throws if F < 3.
template <class S>
numcore::Tensor<S> StackAudio(const numcore::Tensor<S>& raw);

// thumbnails [F x H x W x 3] in [0,1] -> [F x 3 x H x W] for the conv stack.
template <class S>
numcore::TensorPtr<S> ToChannelFirst(const numcore::Tensor<float>& video);

struct VisualFrontendConfig {
  int input_hw = 16;
  int input_channels = 3;
  // Spatial extent halves per layer (3x3 conv, stride 2, pad 1), followed by
  // a temporal conv (3 taps, stride 1, pad 1). Empty means: derive the depth
  // so the final extent is <= 2, with channels 8 -> 16 -> 16 -> ...
  std::vector<int> channels;
  int out_dim = 512;

  int layers() const { return static_cast<int>(channels.size()); }
  void derive_channels();
  void validate() const;
};

// The (2+1)D stack: per layer a 2D spatial convolution over each frame and a
// 1D temporal convolution across frames, each rectified; then global spatial
// averaging, a linear map to out_dim and temporal subsampling by 3.
template <class S>
class VisualFrontend {
 public:
  VisualFrontend(const VisualFrontendConfig& cfg, numcore::ParamStore<S>& params,
                 const std::string& prefix, std::mt19937_64& rng);

  // video [F x C x H x W] -> [floor(F/3) x out_dim]
  numcore::TensorPtr<S> forward(numcore::Tape<S>& tape,
                                const numcore::TensorPtr<S>& video) const;

  // Per-frame features at the raw frame rate, before subsampling.
  numcore::TensorPtr<S> forward_raw_rate(numcore::Tape<S>& tape,
                                         const numcore::TensorPtr<S>& video) const;

  const VisualFrontendConfig& config() const { return cfg_; }

 private:
  VisualFrontendConfig cfg_;
  struct Layer {
    numcore::TensorPtr<S> spatial_w, spatial_b;   // [C1 x C0 x 3 x 3], [C1]
    numcore::TensorPtr<S> temporal_w, temporal_b; // [C1 x C1 x 3], [C1]
  };
  std::vector<Layer> layers_;
  numcore::TensorPtr<S> proj_w_, proj_b_;  // [C_last x out_dim], [out_dim]
};

}  // namespace vcam::frontend

#endif  // VCAM_FRONTEND_H_
