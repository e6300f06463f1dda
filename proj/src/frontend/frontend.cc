// frontend/frontend.cc

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

#include "vcam/frontend.h"

#include <cmath>

namespace vcam::frontend {

std::vector<int64_t> SubsampleIndices(int64_t raw_frames) {
  const int64_t t = StackedFrames(raw_frames);
  std::vector<int64_t> idx(static_cast<size_t>(t));
  for (int64_t i = 0; i < t; ++i) idx[static_cast<size_t>(i)] = 3 * i + 1;
  return idx;
}

template <class S>
numcore::Tensor<S> StackAudio(const numcore::Tensor<S>& raw) {
  VCAM_CHECK(raw.rank() == 2, "StackAudio expects [F x B]");
  const int64_t f = raw.dim(0), b = raw.dim(1);
  VCAM_CHECK(f >= 3, "StackAudio needs at least 3 raw frames, got " << f);
  const int64_t t = StackedFrames(f);
  numcore::Tensor<S> out({t, 3 * b});
  for (int64_t i = 0; i < t; ++i) {
    for (int64_t j = 0; j < 3; ++j) {
      const S* src = raw.ptr() + (3 * i + j) * b;
      S* dst = out.ptr() + i * 3 * b + j * b;
      for (int64_t k = 0; k < b; ++k) dst[k] = std::log1p(src[k]);
    }
  }
  return out;
}

template <class S>
numcore::TensorPtr<S> ToChannelFirst(const numcore::Tensor<float>& video) {
  VCAM_CHECK(video.rank() == 4 && video.dim(3) == 3,
             "ToChannelFirst expects [F x H x W x 3]");
  const int64_t f = video.dim(0), h = video.dim(1), w = video.dim(2);
  auto out = numcore::NewTensor<S>({f, 3, h, w});
  for (int64_t fr = 0; fr < f; ++fr) {
    const float* src = video.ptr() + fr * h * w * 3;
    S* dst = out->ptr() + fr * 3 * h * w;
    for (int64_t y = 0; y < h; ++y) {
      for (int64_t x = 0; x < w; ++x) {
        for (int64_t c = 0; c < 3; ++c) {
          dst[c * h * w + y * w + x] = static_cast<S>(src[(y * w + x) * 3 + c]);
        }
      }
    }
  }
  return out;
}

void VisualFrontendConfig::derive_channels() {
  if (!channels.empty()) return;
  int extent = input_hw;
  int ch = 8;
  while (extent > 2) {
    channels.push_back(ch);
    ch = 16;  // 8 -> 16, then hold
    extent = (extent + 2 - 3) / 2 + 1;
  }
  VCAM_CHECK(!channels.empty(), "input extent " << input_hw
                                                << " already at or below 2");
}

void VisualFrontendConfig::validate() const {
  VCAM_CHECK(input_hw >= 3, "spatial extent " << input_hw
                                              << " smaller than the 3x3 kernel");
  VCAM_CHECK(!channels.empty(), "no conv layers configured");
  VCAM_CHECK(out_dim > 0, "bad output dim");
  int extent = input_hw;
  for (size_t i = 0; i < channels.size(); ++i) {
    VCAM_CHECK(extent >= 3, "layer " << i << " input extent " << extent
                                     << " smaller than the 3x3 kernel");
    extent = (extent + 2 - 3) / 2 + 1;
  }
}

template <class S>
VisualFrontend<S>::VisualFrontend(const VisualFrontendConfig& cfg,
                                  numcore::ParamStore<S>& params,
                                  const std::string& prefix,
                                  std::mt19937_64& rng)
    : cfg_(cfg) {
  cfg_.derive_channels();
  cfg_.validate();
  int c_in = cfg_.input_channels;
  for (int l = 0; l < cfg_.layers(); ++l) {
    const int c_out = cfg_.channels[static_cast<size_t>(l)];
    Layer layer;
    const std::string p = prefix + ".l" + std::to_string(l);
    layer.spatial_w = params.create(p + ".sw", {c_out, c_in, 3, 3}, rng);
    layer.spatial_b = params.create_zeros(p + ".sb", {c_out});
    layer.temporal_w = params.create(p + ".tw", {c_out, c_out, 3}, rng);
    layer.temporal_b = params.create_zeros(p + ".tb", {c_out});
    layers_.push_back(layer);
    c_in = c_out;
  }
  proj_w_ = params.create(prefix + ".proj_w", {c_in, cfg_.out_dim}, rng);
  proj_b_ = params.create_zeros(prefix + ".proj_b", {cfg_.out_dim});
}

template <class S>
numcore::TensorPtr<S> VisualFrontend<S>::forward_raw_rate(
    numcore::Tape<S>& tape, const numcore::TensorPtr<S>& video) const {
  using namespace vcam::numcore;
  VCAM_CHECK(video->rank() == 4, "visual frontend expects [F x C x H x W]");
  VCAM_CHECK(video->dim(1) == cfg_.input_channels &&
                 video->dim(2) == cfg_.input_hw && video->dim(3) == cfg_.input_hw,
             "visual frontend configured for " << cfg_.input_channels << "x"
                                               << cfg_.input_hw << "x"
                                               << cfg_.input_hw);
  TensorPtr<S> x = video;
  for (const auto& layer : layers_) {
    x = relu(tape, conv2d(tape, x, layer.spatial_w, layer.spatial_b,
                          /*stride=*/2, /*pad=*/1));
    x = relu(tape, conv1d_time(tape, x, layer.temporal_w, layer.temporal_b,
                               /*pad=*/1));
  }
  auto pooled = mean_spatial(tape, x);  // [F x C_last]
  return add_bias(tape, matmul(tape, pooled, proj_w_), proj_b_);
}

template <class S>
numcore::TensorPtr<S> VisualFrontend<S>::forward(
    numcore::Tape<S>& tape, const numcore::TensorPtr<S>& video) const {
  const int64_t f = video->dim(0);
  VCAM_CHECK(f >= 3, "visual frontend needs at least 3 frames, got " << f);
  auto feat = forward_raw_rate(tape, video);
  return numcore::gather_rows(tape, feat, SubsampleIndices(f));
}

template numcore::Tensor<float> StackAudio<float>(const numcore::Tensor<float>&);
template numcore::Tensor<double> StackAudio<double>(const numcore::Tensor<double>&);
template numcore::TensorPtr<float> ToChannelFirst<float>(const numcore::Tensor<float>&);
template numcore::TensorPtr<double> ToChannelFirst<double>(const numcore::Tensor<float>&);
template class VisualFrontend<float>;
template class VisualFrontend<double>;

}  // namespace vcam::frontend
