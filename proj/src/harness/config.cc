// harness/config.cc

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

#include "vcam/config.h"

#include <fstream>
#include <sstream>

namespace vcam::harness {

Variant ParseVariant(const std::string& name) {
  if (name == "single_channel_av") return Variant::kSingleChanAV;
  if (name == "mt_audio") return Variant::kMTAudio;
  if (name == "mt_vcam") return Variant::kMTVCAM;
  throw Error("unknown model variant: " + name);
}

const char* VariantName(Variant v) {
  switch (v) {
    case Variant::kSingleChanAV:
      return "single_channel_av";
    case Variant::kMTAudio:
      return "mt_audio";
    case Variant::kMTVCAM:
      return "mt_vcam";
  }
  return "?";
}

namespace {

bool ParseBool(const std::string& v) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw Error("bad boolean value: " + v);
}

std::string Trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

void RunConfig::Set(const std::string& key, const std::string& value) {
  if (key == "variant") variant = value;
  else if (key == "model_dim") model_dim = std::stoi(value);
  else if (key == "ff_dim") ff_dim = std::stoi(value);
  else if (key == "heads") heads = std::stoi(value);
  else if (key == "audio_layers") audio_layers = std::stoi(value);
  else if (key == "visual_layers") visual_layers = std::stoi(value);
  else if (key == "mask_layers") mask_layers = std::stoi(value);
  else if (key == "label_layers") label_layers = std::stoi(value);
  else if (key == "joint_dim") joint_dim = std::stoi(value);
  else if (key == "visual_feat_dim") visual_feat_dim = std::stoi(value);
  else if (key == "dropout") dropout = std::stod(value);
  else if (key == "attention_temperature") attention_temperature = ParseBool(value);
  else if (key == "vocab") vocab = std::stoi(value);
  else if (key == "bands") bands = std::stoi(value);
  else if (key == "thumb_hw") thumb_hw = std::stoi(value);
  else if (key == "frames_per_token") frames_per_token = std::stoi(value);
  else if (key == "utt_min_s") utt_min_s = std::stod(value);
  else if (key == "utt_max_s") utt_max_s = std::stod(value);
  else if (key == "noise_level") noise_level = std::stod(value);
  else if (key == "n_train") n_train = std::stoi(value);
  else if (key == "n_test") n_test = std::stoi(value);
  else if (key == "train_speakers") train_speakers = std::stoi(value);
  else if (key == "test_speakers") test_speakers = std::stoi(value);
  else if (key == "optimizer") optimizer = value;
  else if (key == "learning_rate") learning_rate = std::stod(value);
  else if (key == "adam_beta2") adam_beta2 = std::stod(value);
  else if (key == "adam_eps") adam_eps = std::stod(value);
  else if (key == "momentum") momentum = std::stod(value);
  else if (key == "clip_norm") clip_norm = std::stod(value);
  else if (key == "steps") steps = std::stoi(value);
  else if (key == "batch_size") batch_size = std::stoi(value);
  else if (key == "log_every") log_every = std::stoi(value);
  else if (key == "warmup_steps") warmup_steps = std::stoi(value);
  else if (key == "normalize_loss") normalize_loss = ParseBool(value);
  else if (key == "seed") seed = std::stoull(value);
  else if (key == "threads") threads = std::stoi(value);
  else if (key == "single_thread") single_thread = ParseBool(value);
  else throw Error("unknown config key: " + key);
}

void RunConfig::validate() const {
  ParseVariant(variant);
  VCAM_CHECK(model_dim > 0 && ff_dim > 0 && joint_dim > 0, "bad model dims");
  VCAM_CHECK(model_dim % heads == 0, "model_dim must divide by heads");
  VCAM_CHECK(vocab >= 2, "vocabulary too small");
  VCAM_CHECK(steps >= 0 && batch_size >= 1, "bad optimizer settings");
  VCAM_CHECK(learning_rate > 0 && momentum >= 0 && momentum < 1,
             "bad optimizer settings");
  VCAM_CHECK(optimizer == "adam" || optimizer == "sgd",
             "optimizer must be adam or sgd, got " << optimizer);
  VCAM_CHECK(dropout >= 0.0 && dropout < 1.0, "dropout must be in [0,1)");
}

std::string RunConfig::ToString() const {
  std::ostringstream os;
  os << "variant=" << variant << "\n"
     << "model_dim=" << model_dim << "\n"
     << "ff_dim=" << ff_dim << "\n"
     << "heads=" << heads << "\n"
     << "audio_layers=" << audio_layers << "\n"
     << "visual_layers=" << visual_layers << "\n"
     << "mask_layers=" << mask_layers << "\n"
     << "label_layers=" << label_layers << "\n"
     << "joint_dim=" << joint_dim << "\n"
     << "visual_feat_dim=" << visual_feat_dim << "\n"
     << "dropout=" << dropout << "\n"
     << "attention_temperature=" << (attention_temperature ? 1 : 0) << "\n"
     << "vocab=" << vocab << "\n"
     << "bands=" << bands << "\n"
     << "thumb_hw=" << thumb_hw << "\n"
     << "frames_per_token=" << frames_per_token << "\n"
     << "utt_min_s=" << utt_min_s << "\n"
     << "utt_max_s=" << utt_max_s << "\n"
     << "noise_level=" << noise_level << "\n"
     << "n_train=" << n_train << "\n"
     << "n_test=" << n_test << "\n"
     << "train_speakers=" << train_speakers << "\n"
     << "test_speakers=" << test_speakers << "\n"
     << "optimizer=" << optimizer << "\n"
     << "learning_rate=" << learning_rate << "\n"
     << "adam_beta2=" << adam_beta2 << "\n"
     << "adam_eps=" << adam_eps << "\n"
     << "momentum=" << momentum << "\n"
     << "clip_norm=" << clip_norm << "\n"
     << "steps=" << steps << "\n"
     << "batch_size=" << batch_size << "\n"
     << "log_every=" << log_every << "\n"
     << "warmup_steps=" << warmup_steps << "\n"
     << "normalize_loss=" << (normalize_loss ? 1 : 0) << "\n"
     << "seed=" << seed << "\n"
     << "threads=" << threads << "\n"
     << "single_thread=" << (single_thread ? 1 : 0) << "\n";
  return os.str();
}

RunConfig RunConfig::FromString(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    VCAM_CHECK(eq != std::string::npos, "config line without '=': " << line);
    cfg.Set(Trim(line.substr(0, eq)), Trim(line.substr(eq + 1)));
  }
  cfg.validate();
  return cfg;
}

RunConfig RunConfig::FromFile(const std::string& path) {
  std::ifstream f(path);
  VCAM_CHECK(f.good(), "cannot open config " << path);
  std::stringstream ss;
  ss << f.rdbuf();
  return FromString(ss.str());
}

}  // namespace vcam::harness
