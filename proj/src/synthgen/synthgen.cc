// synthgen/synthgen.cc

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

#include "vcam/synthgen.h"

#include <cmath>
#include <random>

namespace vcam::synthgen {

namespace {

// splitmix64 step; decorrelates user-facing seeds before feeding mt19937_64.
uint64_t MixSeed(uint64_t a, uint64_t b) {
  uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Signature amplitude: small enough that || relu(emb+sig) - emb || stays
// under half the embedding margin, keeping nearest-centroid decoding exact.
float SignatureAmplitude(int bands) {
  return 0.04f * std::sqrt(static_cast<float>(bands));
}

float EmbeddingMargin(int bands) {
  return 0.25f * std::sqrt(static_cast<float>(bands));
}

float Dist2(const std::vector<float>& a, const std::vector<float>& b) {
  float s = 0.0f;
  for (size_t i = 0; i < a.size(); ++i) {
    const float d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

TokenBank::TokenBank(const SynthConfig& cfg)
    : vocab_(cfg.vocab), bands_(cfg.bands) {
  VCAM_CHECK(vocab_ >= 2, "vocabulary needs at least 2 tokens");
  VCAM_CHECK(bands_ >= 4, "need at least 4 audio bands");
  std::mt19937_64 rng(MixSeed(cfg.corpus_seed, 0x70ba11));
  std::uniform_real_distribution<float> d(0.0f, 1.0f);
  const float margin2 = EmbeddingMargin(bands_) * EmbeddingMargin(bands_);
  embeddings_.resize(static_cast<size_t>(vocab_) + 1);
  for (int tok = 1; tok <= vocab_; ++tok) {
    std::vector<float> e(static_cast<size_t>(bands_));
    for (int tries = 0; tries < 10000; ++tries) {
      for (auto& v : e) v = d(rng);
      bool ok = true;
      for (int prev = 1; prev < tok && ok; ++prev) {
        ok = Dist2(e, embeddings_[prev]) >= margin2;
      }
      if (ok) break;
      VCAM_CHECK(tries < 9999, "could not separate " << vocab_ << " tokens in "
                                                     << bands_ << " bands");
    }
    embeddings_[tok] = e;
  }
}

const std::vector<float>& TokenBank::embedding(int token) const {
  VCAM_CHECK(token >= 1 && token <= vocab_, "token " << token
                                                     << " outside vocabulary");
  return embeddings_[static_cast<size_t>(token)];
}

int TokenBank::nearest(const float* frame) const {
  int best = 1;
  float best_d = std::numeric_limits<float>::max();
  for (int tok = 1; tok <= vocab_; ++tok) {
    const auto& e = embeddings_[static_cast<size_t>(tok)];
    float s = 0.0f;
    for (int b = 0; b < bands_; ++b) {
      const float d = frame[b] - e[static_cast<size_t>(b)];
      s += d * d;
    }
    if (s < best_d) {
      best_d = s;
      best = tok;
    }
  }
  return best;
}

SpeakerProfile sample_speaker(const SynthConfig& cfg, uint64_t seed) {
  SpeakerProfile p;
  p.id = static_cast<int64_t>(seed);
  std::mt19937_64 rng(MixSeed(cfg.corpus_seed, MixSeed(seed, 0x5eaf00d)));
  const float amp = SignatureAmplitude(cfg.bands);
  std::uniform_real_distribution<float> sig(-amp, amp);
  p.audio_signature.resize(static_cast<size_t>(cfg.bands));
  for (auto& v : p.audio_signature) v = sig(rng);
  std::uniform_real_distribution<float> style(-1.0f, 1.0f);
  p.visual_style.resize(8);
  for (auto& v : p.visual_style) v = style(rng);
  return p;
}

void render_thumbnail(const SynthConfig& cfg, int token,
                      const std::vector<float>& style, float* out) {
  const int hw = cfg.thumb_hw;
  // 4x4 grid of blocks; block brightness keyed to the token bits, channel
  // gain and a block offset keyed to the style so identity shows through
  // even when two speakers utter the same token.
  const int block = hw / 4 > 0 ? hw / 4 : 1;
  for (int y = 0; y < hw; ++y) {
    for (int x = 0; x < hw; ++x) {
      const int by = y / block < 4 ? y / block : 3;
      const int bx = x / block < 4 ? x / block : 3;
      const int b = by * 4 + bx;
      const int bit = (token >> (b % 5)) & 1;
      const float base = bit ? 0.70f : 0.15f;
      for (int c = 0; c < 3; ++c) {
        const float gain =
            0.75f + 0.25f * style[static_cast<size_t>(c % 8)];
        const float offset =
            0.12f * (style[static_cast<size_t>((b + 3 * c) % 8)] + 1.0f);
        float v = base * gain + offset;
        if (v < 0.0f) v = 0.0f;
        if (v > 1.0f) v = 1.0f;
        out[(y * hw + x) * 3 + c] = v;
      }
    }
  }
}

AVUtterance synth_utterance(const SynthConfig& cfg, const TokenBank& bank,
                            const SpeakerProfile& profile,
                            const std::vector<int>& labels,
                            int frames_per_token, double noise_level,
                            uint64_t noise_seed) {
  VCAM_CHECK(!labels.empty(), "synth_utterance: empty label sequence");
  VCAM_CHECK(frames_per_token >= 2, "frames_per_token must be at least 2");
  VCAM_CHECK(static_cast<int>(profile.audio_signature.size()) == cfg.bands,
             "profile/config band mismatch");

  const int64_t frames =
      static_cast<int64_t>(labels.size()) * frames_per_token;
  AVUtterance u;
  u.speaker_id = profile.id;
  u.labels = labels;
  u.audio_raw = numcore::Tensor<float>({frames, cfg.bands});
  u.video = numcore::Tensor<float>({frames, cfg.thumb_hw, cfg.thumb_hw, 3});
  u.speech_interval = {0, frames};

  std::mt19937_64 rng(MixSeed(noise_seed, MixSeed(cfg.corpus_seed, 0xa0d10)));
  std::uniform_real_distribution<float> noise(-1.0f, 1.0f);

  const int64_t thumb_elems = static_cast<int64_t>(cfg.thumb_hw) *
                              cfg.thumb_hw * 3;
  std::vector<float> thumb(static_cast<size_t>(thumb_elems));
  for (size_t li = 0; li < labels.size(); ++li) {
    const int tok = labels[li];
    const auto& emb = bank.embedding(tok);
    render_thumbnail(cfg, tok, profile.visual_style, thumb.data());
    for (int f = 0; f < frames_per_token; ++f) {
      const int64_t t = static_cast<int64_t>(li) * frames_per_token + f;
      float* arow = u.audio_raw.ptr() + t * cfg.bands;
      for (int b = 0; b < cfg.bands; ++b) {
        float v = emb[static_cast<size_t>(b)] +
                  profile.audio_signature[static_cast<size_t>(b)];
        if (noise_level > 0.0) {
          v += static_cast<float>(noise_level) * noise(rng);
        }
        arow[b] = v > 0.0f ? v : 0.0f;
      }
      std::copy(thumb.begin(), thumb.end(), u.video.ptr() + t * thumb_elems);
    }
  }
  return u;
}

}  // namespace vcam::synthgen
