// vcam/config.h

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

#ifndef VCAM_CONFIG_H_
#define VCAM_CONFIG_H_

#include <cstdint>
#include <string>

#include "vcam/common.h"

namespace vcam::harness {

enum class Variant { kSingleChanAV, kMTAudio, kMTVCAM };

Variant ParseVariant(const std::string& name);
const char* VariantName(Variant v);

// One flat key=value configuration for corpus generation, model size,
// optimization and evaluation. Unknown keys are rejected.
struct RunConfig {
  // model
  std::string variant = "mt_vcam";  // single_channel_av | mt_audio | mt_vcam
  int model_dim = 64;
  int ff_dim = 128;
  int heads = 2;
  int audio_layers = 2;
  int visual_layers = 2;
  int mask_layers = 2;
  int label_layers = 2;
  int joint_dim = 64;
  int visual_feat_dim = 512;
  double dropout = 0.0;
  bool attention_temperature = false;  // config-gated 1/sqrt(D), default off

  // corpus
  int vocab = 32;
  int bands = 16;
  int thumb_hw = 16;
  int frames_per_token = 6;
  double utt_min_s = 3.0;
  double utt_max_s = 8.0;
  double noise_level = 0.05;
  int n_train = 2000;
  int n_test = 200;
  int train_speakers = 64;
  int test_speakers = 16;

  // optimization
  std::string optimizer = "adam";  // adam | sgd (momentum)
  double learning_rate = 0.05;
  double momentum = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  double clip_norm = 5.0;
  int steps = 400;
  int batch_size = 6;
  int log_every = 25;
  int warmup_steps = 40;        // linear learning-rate ramp
  bool normalize_loss = true;   // per alignment transition (M*T + sum U)

  // run control
  uint64_t seed = 1;
  int threads = 2;           // worker count; examples are sharded round-robin
  bool single_thread = false;

  Variant variant_enum() const { return ParseVariant(variant); }
  int effective_threads() const {
    return single_thread ? 1 : (threads > 0 ? threads : 1);
  }

  void Set(const std::string& key, const std::string& value);
  void validate() const;
  std::string ToString() const;

  static RunConfig FromFile(const std::string& path);
  static RunConfig FromString(const std::string& text);
};

}  // namespace vcam::harness

#endif  // VCAM_CONFIG_H_
