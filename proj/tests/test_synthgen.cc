// tests/test_synthgen.cc

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <random>

#include "vcam/synthgen.h"

using namespace vcam;
using namespace vcam::synthgen;

namespace {
SynthConfig DeskConfig() {
  SynthConfig cfg;
  cfg.vocab = 32;
  cfg.bands = 16;
  cfg.thumb_hw = 16;
  cfg.corpus_seed = 77;
  return cfg;
}
}  // namespace

TEST_CASE("sample_speaker: deterministic, distinct, bounded") {
  const auto cfg = DeskConfig();
  auto a = sample_speaker(cfg, 42);
  auto b = sample_speaker(cfg, 42);
  CHECK(a.audio_signature == b.audio_signature);
  CHECK(a.visual_style == b.visual_style);

  auto c = sample_speaker(cfg, 0);
  auto d = sample_speaker(cfg, 1);
  CHECK(c.audio_signature != d.audio_signature);

  for (float v : a.audio_signature) {
    CHECK(std::isfinite(v));
    CHECK(v >= -1.0f);
    CHECK(v <= 1.0f);
  }
}

TEST_CASE("synth_utterance: zero-noise repetition and content separability") {
  const auto cfg = DeskConfig();
  TokenBank bank(cfg);
  auto spk = sample_speaker(cfg, 5);

  auto u = synth_utterance(cfg, bank, spk, {7}, 3, 0.0, 11);
  CHECK(u.frames() == 3);
  CHECK(u.speech_interval == std::array<int64_t, 2>{0, 3});
  for (int64_t t = 1; t < 3; ++t) {
    for (int b = 0; b < cfg.bands; ++b) {
      CHECK(u.audio_raw.at(t, b) == u.audio_raw.at(0, b));
    }
  }

  auto uv = synth_utterance(cfg, bank, spk, {7, 9}, 2, 0.0, 11);
  bool differ = false;
  for (int b = 0; b < cfg.bands; ++b) {
    differ = differ || uv.audio_raw.at(0, b) != uv.audio_raw.at(2, b);
  }
  CHECK(differ);
}

TEST_CASE("synth_utterance: bit-identical under the same seed") {
  const auto cfg = DeskConfig();
  TokenBank bank(cfg);
  auto spk = sample_speaker(cfg, 9);
  auto u1 = synth_utterance(cfg, bank, spk, {1, 2, 3}, 4, 0.2, 123);
  auto u2 = synth_utterance(cfg, bank, spk, {1, 2, 3}, 4, 0.2, 123);
  CHECK(u1.audio_raw.data == u2.audio_raw.data);
  CHECK(u1.video.data == u2.video.data);
}

TEST_CASE("synth_utterance: usage errors") {
  const auto cfg = DeskConfig();
  TokenBank bank(cfg);
  auto spk = sample_speaker(cfg, 1);
  CHECK_THROWS_AS(synth_utterance(cfg, bank, spk, {}, 3, 0.0, 0), Error);
  CHECK_THROWS_AS(synth_utterance(cfg, bank, spk, {1}, 1, 0.0, 0), Error);
  CHECK_THROWS_AS(synth_utterance(cfg, bank, spk, {0}, 3, 0.0, 0), Error);
  CHECK_THROWS_AS(synth_utterance(cfg, bank, spk, {cfg.vocab + 1}, 3, 0.0, 0),
                  Error);
}

TEST_CASE("nearest-centroid recovers labels from zero-noise audio") {
  // the task must be learnable by construction, for any speaker and seed
  const auto cfg = DeskConfig();
  TokenBank bank(cfg);
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> tok(1, cfg.vocab);
  for (int rep = 0; rep < 20; ++rep) {
    auto spk = sample_speaker(cfg, 1000 + rep);
    std::vector<int> labels(12);
    for (auto& y : labels) y = tok(rng);
    auto u = synth_utterance(cfg, bank, spk, labels, 3, 0.0, rep);
    for (int64_t t = 0; t < u.frames(); ++t) {
      const int want = labels[static_cast<size_t>(t / 3)];
      CHECK(bank.nearest(u.audio_raw.ptr() + t * cfg.bands) == want);
    }
  }
}

TEST_CASE("visual identity: same labels, different speakers, different video") {
  const auto cfg = DeskConfig();
  TokenBank bank(cfg);
  auto s1 = sample_speaker(cfg, 100);
  auto s2 = sample_speaker(cfg, 200);
  auto u1 = synth_utterance(cfg, bank, s1, {4, 4, 4}, 2, 0.0, 0);
  auto u2 = synth_utterance(cfg, bank, s2, {4, 4, 4}, 2, 0.0, 0);
  CHECK(u1.video.data != u2.video.data);
  // and the video stream is one thumbnail per audio frame
  CHECK(u1.video.dim(0) == u1.audio_raw.dim(0));
}

TEST_CASE("thumbnails are in [0,1] and all-zero only for the blank track") {
  const auto cfg = DeskConfig();
  TokenBank bank(cfg);
  auto spk = sample_speaker(cfg, 3);
  auto u = synth_utterance(cfg, bank, spk, {17}, 2, 0.0, 0);
  float mx = 0.0f;
  for (float v : u.video.data) {
    CHECK(v >= 0.0f);
    CHECK(v <= 1.0f);
    mx = v > mx ? v : mx;
  }
  CHECK(mx > 0.0f);
}
