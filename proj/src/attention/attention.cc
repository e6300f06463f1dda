// attention/attention.cc

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

#include "vcam/attention.h"

#include <cmath>
#include <fstream>

namespace vcam::attention {

using namespace vcam::numcore;

template <class S>
TensorPtr<S> similarity(Tape<S>& tape, const TensorPtr<S>& audio,
                        const TensorPtr<S>& visual, bool with_temperature) {
  VCAM_CHECK(audio->rank() == 2 && visual->rank() == 2,
             "similarity expects 2-D sequences");
  VCAM_CHECK(audio->dim(1) == visual->dim(1),
             "similarity dims differ: " << audio->dim(1) << " vs "
                                        << visual->dim(1));
  VCAM_CHECK(audio->dim(0) == visual->dim(0),
             "similarity frame counts differ: " << audio->dim(0) << " vs "
                                                << visual->dim(0));
  auto sim = matmul_nt(tape, audio, visual);
  if (with_temperature) {
    sim = scale(tape, sim,
                S(1) / static_cast<S>(std::sqrt(double(audio->dim(1)))));
  }
  return sim;
}

template <class S>
TensorPtr<S> attention_weights(Tape<S>& tape, const TensorPtr<S>& sim) {
  return softmax_rows(tape, sim);
}

template <class S>
TensorPtr<S> visual_context(Tape<S>& tape, const TensorPtr<S>& weights,
                            const TensorPtr<S>& visual) {
  VCAM_CHECK(weights->dim(1) == visual->dim(0),
             "context: weight columns " << weights->dim(1)
                                        << " vs visual rows "
                                        << visual->dim(0));
  return matmul(tape, weights, visual);
}

template <class S>
TensorPtr<S> mask_input_vcam(Tape<S>& tape, const TensorPtr<S>& audio,
                             const TensorPtr<S>& context) {
  VCAM_CHECK(audio->dim(0) == context->dim(0),
             "mask input: frame counts differ: " << audio->dim(0) << " vs "
                                                 << context->dim(0));
  return concat_cols(tape, audio, context);
}

template <class S>
TensorPtr<S> mask_input_audio_only(Tape<S>& tape, const TensorPtr<S>& audio,
                                   int channel, int num_channels) {
  VCAM_CHECK(num_channels >= 1, "need at least one channel");
  VCAM_CHECK(channel >= 0 && channel < num_channels,
             "channel " << channel << " outside [0," << num_channels << ")");
  const int64_t t = audio->dim(0);
  auto onehot = NewTensor<S>({t, num_channels});
  for (int64_t r = 0; r < t; ++r) onehot->at(r, channel) = S(1);
  return concat_cols(tape, audio, onehot);
}

void WritePgm(const std::string& path, const Tensor<float>& map) {
  VCAM_CHECK(map.rank() == 2, "PGM export expects a 2-D map");
  const int64_t rows = map.dim(0), cols = map.dim(1);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  VCAM_CHECK(f.good(), "cannot open " << path << " for writing");
  f << "P5\n" << cols << " " << rows << "\n255\n";
  std::vector<unsigned char> line(static_cast<size_t>(cols));
  for (int64_t r = 0; r < rows; ++r) {
    const float* row = map.ptr() + r * cols;
    float mx = 0.0f;
    for (int64_t c = 0; c < cols; ++c) mx = row[c] > mx ? row[c] : mx;
    const float s = mx > 0.0f ? 255.0f / mx : 0.0f;
    for (int64_t c = 0; c < cols; ++c) {
      line[static_cast<size_t>(c)] =
          static_cast<unsigned char>(row[c] * s + 0.5f);
    }
    f.write(reinterpret_cast<const char*>(line.data()), cols);
  }
  VCAM_CHECK(f.good(), "write failed for " << path);
}

#define VCAM_INSTANTIATE_ATTN(S)                                              \
  template TensorPtr<S> similarity<S>(Tape<S>&, const TensorPtr<S>&,          \
                                      const TensorPtr<S>&, bool);              \
  template TensorPtr<S> attention_weights<S>(Tape<S>&, const TensorPtr<S>&);  \
  template TensorPtr<S> visual_context<S>(Tape<S>&, const TensorPtr<S>&,      \
                                          const TensorPtr<S>&);                \
  template TensorPtr<S> mask_input_vcam<S>(Tape<S>&, const TensorPtr<S>&,     \
                                           const TensorPtr<S>&);               \
  template TensorPtr<S> mask_input_audio_only<S>(Tape<S>&,                     \
                                                 const TensorPtr<S>&, int, int);

VCAM_INSTANTIATE_ATTN(float)
VCAM_INSTANTIATE_ATTN(double)

#undef VCAM_INSTANTIATE_ATTN

}  // namespace vcam::attention
