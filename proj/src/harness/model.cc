// harness/model.cc

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

#include "vcam/model.h"

#include <filesystem>
#include <fstream>

#include "vcam/tensor_io.h"

namespace vcam::harness {

namespace fs = std::filesystem;
using namespace vcam::numcore;

template <class S>
ExampleFeatures<S> PrepareFeatures(const simcorpus::OverlappedExample& ex) {
  ExampleFeatures<S> feats;
  feats.id = ex.id;
  feats.scenario = ex.scenario;
  feats.refs = ex.refs;
  feats.speech_intervals = ex.speech_intervals;
  feats.overlap_interval = ex.overlap_interval;

  auto audio = frontend::StackAudio(ex.audio_raw);
  auto audio_t = NewTensor<S>(audio.shape);
  for (int64_t i = 0; i < audio.numel(); ++i) {
    audio_t->data[static_cast<size_t>(i)] =
        static_cast<S>(audio.data[static_cast<size_t>(i)]);
  }
  feats.audio = audio_t;
  for (const auto& track : ex.tracks) {
    feats.videos.push_back(frontend::ToChannelFirst<S>(track));
  }
  return feats;
}

template <class S>
MultiTalkerModel<S>::MultiTalkerModel(const RunConfig& cfg)
    : cfg_(cfg), variant_(cfg.variant_enum()),
      params_(std::make_unique<ParamStore<S>>()) {
  cfg_.validate();
  std::mt19937_64 rng(cfg_.seed);
  const int d = cfg_.model_dim;

  encoders::TTConfig audio_cfg{cfg_.audio_layers, cfg_.heads, d, cfg_.ff_dim,
                               cfg_.dropout};
  audio_encoder_ = std::make_unique<encoders::TransformerEncoder<S>>(
      audio_cfg, 3 * cfg_.bands, /*causal=*/false, *params_, "audio", rng);

  if (variant_ != Variant::kMTAudio) {
    frontend::VisualFrontendConfig vf;
    vf.input_hw = cfg_.thumb_hw;
    vf.out_dim = cfg_.visual_feat_dim;
    visual_frontend_ = std::make_unique<frontend::VisualFrontend<S>>(
        vf, *params_, "vfront", rng);
    encoders::TTConfig visual_cfg{cfg_.visual_layers, cfg_.heads, d,
                                  cfg_.ff_dim, cfg_.dropout};
    visual_encoder_ = std::make_unique<encoders::TransformerEncoder<S>>(
        visual_cfg, cfg_.visual_feat_dim, /*causal=*/false, *params_, "visual",
        rng);
  }

  // mask input: encoded audio plus either the visual context (or the single
  // encoded visual stream) or the channel one-hot
  const int64_t mask_in =
      variant_ == Variant::kMTAudio ? d + 2 : d + d;
  encoders::TTConfig mask_cfg{cfg_.mask_layers, cfg_.heads, d, cfg_.ff_dim,
                              cfg_.dropout};
  mask_encoder_ = std::make_unique<encoders::TransformerEncoder<S>>(
      mask_cfg, mask_in, /*causal=*/false, *params_, "mask", rng);

  encoders::TTConfig label_cfg{cfg_.label_layers, cfg_.heads, d, cfg_.ff_dim,
                               cfg_.dropout};
  label_encoder_ = std::make_unique<encoders::LabelEncoder<S>>(
      cfg_.vocab, label_cfg, *params_, "label", rng);
  joint_ = std::make_unique<encoders::JointNetwork<S>>(
      d, d, cfg_.joint_dim, cfg_.vocab, *params_, "joint", rng);
}

template <class S>
int MultiTalkerModel<S>::channels() const {
  return variant_ == Variant::kSingleChanAV ? 1 : 2;
}

template <class S>
typename MultiTalkerModel<S>::ChannelEncodings
MultiTalkerModel<S>::EncodeChannels(Tape<S>& tape,
                                    const ExampleFeatures<S>& feats,
                                    std::mt19937_64* dropout_rng) const {
  ChannelEncodings enc;
  enc.audio_enc =
      audio_encoder_->forward(tape, feats.audio, true, dropout_rng);
  const int64_t t_len = enc.audio_enc->dim(0);

  switch (variant_) {
    case Variant::kSingleChanAV: {
      VCAM_CHECK(!feats.videos.empty(), "baseline needs the speaker's track");
      auto vis_feat = visual_frontend_->forward(tape, feats.videos[0]);
      VCAM_CHECK(vis_feat->dim(0) == t_len, "audio/visual row mismatch");
      auto vis_enc =
          visual_encoder_->forward(tape, vis_feat, true, dropout_rng);
      // concatenated streams, no attention
      auto mask_in = attention::mask_input_vcam(tape, enc.audio_enc, vis_enc);
      enc.mask_out.push_back(
          mask_encoder_->forward(tape, mask_in, true, dropout_rng));
      break;
    }
    case Variant::kMTAudio: {
      for (int m = 0; m < 2; ++m) {
        auto mask_in =
            attention::mask_input_audio_only(tape, enc.audio_enc, m, 2);
        enc.mask_out.push_back(
            mask_encoder_->forward(tape, mask_in, true, dropout_rng));
      }
      break;
    }
    case Variant::kMTVCAM: {
      VCAM_CHECK(feats.num_tracks() == 2, "VCAM expects two mouth-tracks");
      for (int m = 0; m < 2; ++m) {
        auto vis_feat = visual_frontend_->forward(tape, feats.videos[m]);
        VCAM_CHECK(vis_feat->dim(0) == t_len, "audio/visual row mismatch");
        auto vis_enc =
            visual_encoder_->forward(tape, vis_feat, true, dropout_rng);
        auto sim = attention::similarity(tape, enc.audio_enc, vis_enc,
                                         cfg_.attention_temperature);
        auto w = attention::attention_weights(tape, sim);
        auto ctx = attention::visual_context(tape, w, vis_enc);
        auto mask_in = attention::mask_input_vcam(tape, enc.audio_enc, ctx);
        enc.mask_out.push_back(
            mask_encoder_->forward(tape, mask_in, true, dropout_rng));
        enc.att_weights.push_back(w);
        enc.att_sims.push_back(sim);
      }
      break;
    }
  }
  return enc;
}

template <class S>
TensorPtr<S> MultiTalkerModel<S>::ExampleLoss(Tape<S>& tape,
                                              const ExampleFeatures<S>& feats,
                                              std::mt19937_64* dropout_rng) const {
  auto enc = EncodeChannels(tape, feats, dropout_rng);
  const int64_t t_len = enc.audio_enc->dim(0);
  std::vector<TensorPtr<S>> lattices;
  std::vector<std::vector<int>> refs;
  for (size_t m = 0; m < enc.mask_out.size(); ++m) {
    VCAM_CHECK(m < feats.refs.size(), "missing reference for channel " << m);
    auto pred = label_encoder_->forward(tape, feats.refs[m]);
    lattices.push_back(
        joint_->lattice_log_probs(tape, enc.mask_out[m], pred));
    refs.push_back(feats.refs[m]);
  }
  return transducer::multichannel_loss(tape, lattices, refs, t_len);
}

template <class S>
typename MultiTalkerModel<S>::Decoded
MultiTalkerModel<S>::Decode(const ExampleFeatures<S>& feats,
                            bool want_maps) const {
  Decoded out;
  Tape<S> tape;
  tape.grad_enabled = false;
  auto enc = EncodeChannels(tape, feats, nullptr);
  const int64_t t_len = enc.audio_enc->dim(0);

  for (size_t m = 0; m < enc.mask_out.size(); ++m) {
    auto enc_proj = joint_->project_enc(tape, enc.mask_out[m]);
    // prediction rows are re-encoded whenever the prefix grows
    std::vector<int> cached_prefix{-1};  // force initial encoding
    TensorPtr<S> pred_proj;
    auto argmax = [&](int64_t t, const std::vector<int>& prefix) {
      if (prefix != cached_prefix) {
        auto pred = label_encoder_->forward(tape, prefix);
        pred_proj = joint_->project_pred(tape, pred);
        cached_prefix = prefix;
      }
      const auto lp = joint_->log_probs_at(
          *enc_proj, t, *pred_proj, static_cast<int64_t>(prefix.size()));
      int best = 0;
      for (size_t k = 1; k < lp.size(); ++k) {
        if (lp[k] > lp[best]) best = static_cast<int>(k);
      }
      return best;
    };
    out.hyps.push_back(transducer::greedy_decode_frames(
        t_len, static_cast<int>(m), transducer::kMaxEmissionsPerFrame, argmax));
  }

  if (want_maps && variant_ == Variant::kMTVCAM) {
    for (size_t m = 0; m < enc.att_weights.size(); ++m) {
      attention::AttentionMap map;
      map.weights = Tensor<float>(enc.att_weights[m]->shape);
      map.similarities = Tensor<float>(enc.att_sims[m]->shape);
      for (int64_t i = 0; i < enc.att_weights[m]->numel(); ++i) {
        map.weights.data[static_cast<size_t>(i)] =
            static_cast<float>(enc.att_weights[m]->data[static_cast<size_t>(i)]);
        map.similarities.data[static_cast<size_t>(i)] = static_cast<float>(
            enc.att_sims[m]->data[static_cast<size_t>(i)]);
      }
      out.maps.push_back(std::move(map));
    }
  }
  return out;
}

namespace {

std::string ParamFile(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / "params" / (name + ".vct")).string();
}

}  // namespace

template <class S>
void MultiTalkerModel<S>::Save(const std::string& ckpt_dir) const {
  fs::create_directories(fs::path(ckpt_dir) / "params");
  {
    std::ofstream f(fs::path(ckpt_dir) / "model.cfg", std::ios::trunc);
    VCAM_CHECK(f.good(), "cannot write model.cfg in " << ckpt_dir);
    f << cfg_.ToString();
  }
  for (const auto& [name, t] : params_->all()) {
    Tensor<float> out(t->shape);
    for (int64_t i = 0; i < t->numel(); ++i) {
      out.data[static_cast<size_t>(i)] =
          static_cast<float>(t->data[static_cast<size_t>(i)]);
    }
    SaveTensor(ParamFile(ckpt_dir, name), out);
  }
}

template <class S>
std::unique_ptr<MultiTalkerModel<S>> MultiTalkerModel<S>::Load(
    const std::string& ckpt_dir) {
  const auto cfg_path = fs::path(ckpt_dir) / "model.cfg";
  VCAM_CHECK(fs::exists(cfg_path), "no model.cfg under " << ckpt_dir);
  auto cfg = RunConfig::FromFile(cfg_path.string());
  auto model = std::make_unique<MultiTalkerModel<S>>(cfg);
  for (const auto& [name, t] : model->params_->all()) {
    const auto file = ParamFile(ckpt_dir, name);
    VCAM_CHECK(fs::exists(file), "checkpoint missing parameter " << name);
    auto loaded = LoadTensor(file);
    VCAM_CHECK(loaded.shape == t->shape, "shape mismatch for " << name);
    for (int64_t i = 0; i < t->numel(); ++i) {
      t->data[static_cast<size_t>(i)] =
          static_cast<S>(loaded.data[static_cast<size_t>(i)]);
    }
  }
  return model;
}

template struct ExampleFeatures<float>;
template struct ExampleFeatures<double>;
template ExampleFeatures<float> PrepareFeatures<float>(
    const simcorpus::OverlappedExample&);
template ExampleFeatures<double> PrepareFeatures<double>(
    const simcorpus::OverlappedExample&);
template class MultiTalkerModel<float>;
template class MultiTalkerModel<double>;

}  // namespace vcam::harness
