// vcam/synthgen.h

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

#ifndef VCAM_SYNTHGEN_H_
#define VCAM_SYNTHGEN_H_

#include <array>
#include <cstdint>
#include <vector>

#include "vcam/tensor.h"

// Synthetic single-speaker audio-visual utterances. Audio is generated
// directly as non-negative band energies (no waveform DSP); mixing elsewhere
// is additive in this energy domain. Thumbnails carry both the current token
// and the speaker's visual style, so the video channel is informative about
// content and identity.

namespace vcam::synthgen {

struct SynthConfig {
  int vocab = 32;      // token ids 1..vocab; 0 is reserved for the blank
  int bands = 16;      // raw audio band count
  int thumb_hw = 16;   // thumbnail height and width
  uint64_t corpus_seed = 1234;  // seeds the shared token energy patterns
};

struct SpeakerProfile {
  int64_t id = -1;
  std::vector<float> audio_signature;  // length bands, components in [-1,1]
  std::vector<float> visual_style;     // 8 rendering parameters in [-1,1]
};

struct AVUtterance {
  int64_t speaker_id = -1;
  std::vector<int> labels;               // non-empty, each in 1..vocab
  numcore::Tensor<float> audio_raw;      // F x B non-negative energy frames
  numcore::Tensor<float> video;          // F x H x W x 3 in [0,1]
  std::array<int64_t, 2> speech_interval{0, 0};  // [start, end) frames

  int64_t frames() const { return audio_raw.dim(0); }
};

// Per-token energy patterns shared across the corpus. Embeddings are
// rejection-sampled to keep a minimum pairwise distance, so zero-noise frames
// stay nearest-centroid decodable even with the speaker signature added.
class TokenBank {
 public:
  explicit TokenBank(const SynthConfig& cfg);

  const std::vector<float>& embedding(int token) const;  // token in 1..vocab
  // Nearest-centroid classification of one B-band frame.
  int nearest(const float* frame) const;
  int vocab() const { return vocab_; }

 private:
  int vocab_;
  int bands_;
  std::vector<std::vector<float>> embeddings_;  // index 1..vocab; [0] unused
};

SpeakerProfile sample_speaker(const SynthConfig& cfg, uint64_t seed);

// Each label drives frames_per_token consecutive frames. Audio frame =
// relu(token embedding + speaker signature + noise), video frame = rendered
// (token, style) pattern. Deterministic in (profile, labels, noise_seed).
AVUtterance synth_utterance(const SynthConfig& cfg, const TokenBank& bank,
                            const SpeakerProfile& profile,
                            const std::vector<int>& labels,
                            int frames_per_token, double noise_level,
                            uint64_t noise_seed);

// One H x W x 3 thumbnail for (token, style); exposed for tests.
void render_thumbnail(const SynthConfig& cfg, int token,
                      const std::vector<float>& style, float* out);

}  // namespace vcam::synthgen

#endif  // VCAM_SYNTHGEN_H_
