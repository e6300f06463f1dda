// vcam/attention.h

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

#ifndef VCAM_ATTENTION_H_
#define VCAM_ATTENTION_H_

#include <string>

#include "vcam/ops.h"

// The visual context attention mechanism: plain inner-product similarity
// between each encoded audio frame and every encoded visual frame of one
// mouth-track, row-softmax over the visual axis, and the attention-weighted
// visual context. Also the mask-encoder input assembly for both the
// visual-context model and the audio-only channel-one-hot baseline.

namespace vcam::attention {

// S[i][j] = <audio row i, visual row j>. The similarity is written in the
// source convention S_{i,j} = V_i^T A_j with i over video and j over audio;
// everything downstream consumes the [audio][video] arrangement, so this
// returns that transposed layout directly. A plain inner product, no scaling;
// with_temperature divides by sqrt(D) and exists only as a config-gated
// variant (default off).
template <class S>
numcore::TensorPtr<S> similarity(numcore::Tape<S>& tape,
                                 const numcore::TensorPtr<S>& audio,
                                 const numcore::TensorPtr<S>& visual,
                                 bool with_temperature = false);

// Row-wise softmax over the visual-frame axis for each audio frame.
template <class S>
numcore::TensorPtr<S> attention_weights(numcore::Tape<S>& tape,
                                        const numcore::TensorPtr<S>& sim);

// v'_t = sum_i w[t][i] * visual row i; each output row is a convex
// combination of the encoded visual rows.
template <class S>
numcore::TensorPtr<S> visual_context(numcore::Tape<S>& tape,
                                     const numcore::TensorPtr<S>& weights,
                                     const numcore::TensorPtr<S>& visual);

// Framewise [a_t || v'_t] concatenation feeding the mask encoder.
template <class S>
numcore::TensorPtr<S> mask_input_vcam(numcore::Tape<S>& tape,
                                      const numcore::TensorPtr<S>& audio,
                                      const numcore::TensorPtr<S>& context);

// Framewise [a_t || onehot(m)] for the audio-only multi-talker baseline.
template <class S>
numcore::TensorPtr<S> mask_input_audio_only(numcore::Tape<S>& tape,
                                            const numcore::TensorPtr<S>& audio,
                                            int channel, int num_channels);

// T x T attention map retained for inspection and active-speaker scoring.
// Rows are audio frames; weights = softmax_rows(similarities).
struct AttentionMap {
  numcore::Tensor<float> weights;
  numcore::Tensor<float> similarities;
};

// 8-bit grayscale PGM (P5), each row scaled to [0,255] by its own maximum.
void WritePgm(const std::string& path, const numcore::Tensor<float>& map);

}  // namespace vcam::attention

#endif  // VCAM_ATTENTION_H_
