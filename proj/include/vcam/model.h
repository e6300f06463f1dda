// vcam/model.h

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

#ifndef VCAM_MODEL_H_
#define VCAM_MODEL_H_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vcam/attention.h"
#include "vcam/config.h"
#include "vcam/encoders.h"
#include "vcam/frontend.h"
#include "vcam/simcorpus.h"
#include "vcam/transducer.h"

namespace vcam::harness {

// Network inputs prepared from one corpus example: compressed/stacked audio
// and channel-first video, plus the references and intervals carried along.
template <class S>
struct ExampleFeatures {
  numcore::TensorPtr<S> audio;                     // [T x 3B]
  std::vector<numcore::TensorPtr<S>> videos;       // per track [F x 3 x H x W]
  std::vector<std::vector<int>> refs;
  std::vector<std::array<int64_t, 2>> speech_intervals;
  std::array<int64_t, 2> overlap_interval{0, 0};
  simcorpus::Scenario scenario = simcorpus::Scenario::kOverlap;
  std::string id;

  int64_t frames() const { return audio->dim(0); }  // stacked rate
  int num_tracks() const { return static_cast<int>(videos.size()); }
};

template <class S>
ExampleFeatures<S> PrepareFeatures(const simcorpus::OverlappedExample& ex);

// One of the three systems: the single-channel audio-visual baseline, the
// audio-only multi-talker model with channel one-hot conditioning, or the
// visual-context-attention multi-talker model. All share the encoder /
// label-encoder / joint-network skeleton; they differ in what conditions the
// mask encoder.
template <class S>
class MultiTalkerModel {
 public:
  explicit MultiTalkerModel(const RunConfig& cfg);

  // Summed per-channel transducer loss for one example (single channel for
  // the baseline variant).
  numcore::TensorPtr<S> ExampleLoss(numcore::Tape<S>& tape,
                                    const ExampleFeatures<S>& feats,
                                    std::mt19937_64* dropout_rng = nullptr) const;

  struct Decoded {
    std::vector<transducer::ChannelHypothesis> hyps;  // one per channel
    std::vector<attention::AttentionMap> maps;        // per track; vcam only
  };
  // Greedy decoding, one pass per channel; no gradients recorded.
  Decoded Decode(const ExampleFeatures<S>& feats, bool want_maps = false) const;

  const RunConfig& config() const { return cfg_; }
  numcore::ParamStore<S>& params() { return *params_; }
  const numcore::ParamStore<S>& params() const { return *params_; }
  int channels() const;

  void Save(const std::string& ckpt_dir) const;
  static std::unique_ptr<MultiTalkerModel<S>> Load(const std::string& ckpt_dir);

 private:
  struct ChannelEncodings {
    numcore::TensorPtr<S> audio_enc;                 // [T x D]
    std::vector<numcore::TensorPtr<S>> mask_out;     // per channel [T x D]
    std::vector<numcore::TensorPtr<S>> att_weights;  // per track (vcam)
    std::vector<numcore::TensorPtr<S>> att_sims;     // per track (vcam)
  };
  ChannelEncodings EncodeChannels(numcore::Tape<S>& tape,
                                  const ExampleFeatures<S>& feats,
                                  std::mt19937_64* dropout_rng) const;

  RunConfig cfg_;
  Variant variant_;
  std::unique_ptr<numcore::ParamStore<S>> params_;
  std::unique_ptr<frontend::VisualFrontend<S>> visual_frontend_;
  std::unique_ptr<encoders::TransformerEncoder<S>> audio_encoder_;
  std::unique_ptr<encoders::TransformerEncoder<S>> visual_encoder_;
  std::unique_ptr<encoders::TransformerEncoder<S>> mask_encoder_;
  std::unique_ptr<encoders::LabelEncoder<S>> label_encoder_;
  std::unique_ptr<encoders::JointNetwork<S>> joint_;
};

}  // namespace vcam::harness

#endif  // VCAM_MODEL_H_
