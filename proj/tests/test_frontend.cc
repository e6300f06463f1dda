// tests/test_frontend.cc
//
// Audio stacking shape rules, the (2+1)D stack's shape arithmetic, identity
// kernels, parameter-count accounting and the temporal alignment contract.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "testutil.h"
#include "vcam/frontend.h"
#include "vcam/synthgen.h"

using namespace vcam;
using namespace vcam::numcore;
using namespace vcam::frontend;
using vcam::testutil::FillUniform;

TEST_CASE("stack_audio shape rules and zero case") {
  Tensor<float> raw6({6, 80});
  CHECK(StackAudio(raw6).shape == std::vector<int64_t>{2, 240});

  Tensor<float> raw7({7, 80});  // one leftover frame dropped from the tail
  CHECK(StackAudio(raw7).shape == std::vector<int64_t>{2, 240});

  auto stacked = StackAudio(raw6);  // zeros in, zeros out: log1p(0) = 0
  for (float v : stacked.data) CHECK(v == 0.0f);

  Tensor<float> tiny({2, 80});
  CHECK_THROWS_AS(StackAudio(tiny), Error);
}

TEST_CASE("stack_audio compresses and concatenates three raw frames") {
  Tensor<float> raw({3, 2});
  raw.data = {1.0f, 2.0f, 3.0f, 4.0f, 5.0f, 6.0f};
  auto s = StackAudio(raw);
  CHECK(s.shape == std::vector<int64_t>{1, 6});
  for (int i = 0; i < 6; ++i) {
    CHECK(s.data[i] == doctest::Approx(std::log1p(raw.data[i])));
  }
}

TEST_CASE("visual frontend: 9 frames of 16x16x3 through two layers -> 3x512") {
  VisualFrontendConfig cfg;
  cfg.input_hw = 16;
  cfg.channels = {8, 16};  // spatial path 16 -> 8 -> 4
  cfg.out_dim = 512;
  ParamStore<float> params;
  std::mt19937_64 rng(1);
  VisualFrontend<float> fe(cfg, params, "vf", rng);

  Tape<float> tape;
  auto video = NewTensor<float>({9, 3, 16, 16});
  FillUniform(rng, video->data, 0.0f, 1.0f);
  auto raw_rate = fe.forward_raw_rate(tape, video);
  CHECK(raw_rate->shape == std::vector<int64_t>{9, 512});
  auto out = fe.forward(tape, video);
  CHECK(out->shape == std::vector<int64_t>{3, 512});
}

TEST_CASE("default depth repeats until the spatial extent is at most 2") {
  VisualFrontendConfig cfg;
  cfg.input_hw = 16;
  cfg.derive_channels();
  CHECK(cfg.channels == std::vector<int>{8, 16, 16});  // 16 -> 8 -> 4 -> 2
}

TEST_CASE("identity kernels make the stack a pure per-frame map") {
  VisualFrontendConfig cfg;
  cfg.input_hw = 8;
  cfg.channels = {4};
  cfg.out_dim = 16;
  ParamStore<float> params;
  std::mt19937_64 rng(2);
  VisualFrontend<float> fe(cfg, params, "vf", rng);

  // temporal kernel: center tap only (identity across time)
  auto tw = params.get("vf.l0.tw");
  std::fill(tw->data.begin(), tw->data.end(), 0.0f);
  for (int co = 0; co < 4; ++co) tw->data[(co * 4 + co) * 3 + 1] = 1.0f;
  auto tb = params.get("vf.l0.tb");
  std::fill(tb->data.begin(), tb->data.end(), 0.0f);
  // spatial kernel: center tap only (1x1-like behavior)
  auto sw = params.get("vf.l0.sw");
  std::mt19937_64 rng2(3);
  std::vector<float> center(4 * 3);
  FillUniform(rng2, center, 0.1f, 0.9f);
  std::fill(sw->data.begin(), sw->data.end(), 0.0f);
  for (int co = 0; co < 4; ++co) {
    for (int ci = 0; ci < 3; ++ci) {
      sw->data[((co * 3 + ci) * 3 + 1) * 3 + 1] = center[co * 3 + ci];
    }
  }

  // frames 1 and 4 identical; they are the sampled triplet centers of the
  // first two output rows
  auto video = NewTensor<float>({6, 3, 8, 8});
  FillUniform(rng2, video->data, 0.0f, 1.0f);
  const int64_t fsz = 3 * 8 * 8;
  std::copy(video->ptr() + 1 * fsz, video->ptr() + 2 * fsz,
            video->ptr() + 4 * fsz);

  Tape<float> tape;
  auto out = fe.forward(tape, video);
  CHECK(out->dim(0) == 2);
  for (int64_t c = 0; c < out->dim(1); ++c) {
    CHECK(out->at(0, c) == doctest::Approx(out->at(1, c)).epsilon(1e-6));
  }
}

TEST_CASE("factorized layer parameter count: 768 vs 1728 for full 3D") {
  VisualFrontendConfig cfg;
  cfg.input_hw = 8;
  cfg.input_channels = 8;
  cfg.channels = {8};
  cfg.out_dim = 4;
  ParamStore<float> params;
  std::mt19937_64 rng(4);
  VisualFrontend<float> fe(cfg, params, "vf", rng);
  const int64_t factorized =
      params.get("vf.l0.sw")->numel() + params.get("vf.l0.tw")->numel();
  CHECK(factorized == 3 * 3 * 8 * 8 + 3 * 8 * 8);  // 768
  CHECK(factorized == 768);
  const int64_t full_3d = 3 * 3 * 3 * 8 * 8;
  CHECK(full_3d == 1728);
  CHECK(factorized < full_3d);
}

TEST_CASE("temporal alignment: stacked audio and visual rows always agree") {
  using namespace vcam::synthgen;
  SynthConfig scfg;
  scfg.bands = 8;
  scfg.thumb_hw = 8;
  TokenBank bank(scfg);
  VisualFrontendConfig cfg;
  cfg.input_hw = 8;
  cfg.channels = {8};
  cfg.out_dim = 32;
  ParamStore<float> params;
  std::mt19937_64 rng(5);
  VisualFrontend<float> fe(cfg, params, "vf", rng);

  for (int len : {3, 4, 7, 10}) {
    auto spk = sample_speaker(scfg, len);
    std::vector<int> labels(static_cast<size_t>(len), 3);
    auto u = synth_utterance(scfg, bank, spk, labels, 2, 0.0, 0);
    auto audio = StackAudio(u.audio_raw);
    Tape<float> tape;
    tape.grad_enabled = false;
    auto visual = fe.forward(tape, ToChannelFirst<float>(u.video));
    CHECK(audio.dim(0) == visual->dim(0));
  }
}

TEST_CASE("time covariance: +3 raw frames shift the output by one row") {
  VisualFrontendConfig cfg;
  cfg.input_hw = 8;
  cfg.channels = {8, 8};
  cfg.out_dim = 24;
  ParamStore<float> params;
  std::mt19937_64 rng(6);
  VisualFrontend<float> fe(cfg, params, "vf", rng);

  const int64_t f = 24, fsz = 3 * 8 * 8;
  auto video = NewTensor<float>({f, 3, 8, 8});
  FillUniform(rng, video->data, 0.0f, 1.0f);
  auto shifted = NewTensor<float>({f + 3, 3, 8, 8});
  FillUniform(rng, shifted->data, 0.0f, 1.0f);  // fresh boundary frames
  std::copy(video->data.begin(), video->data.end(),
            shifted->ptr() + 3 * fsz);

  Tape<float> tape;
  tape.grad_enabled = false;
  auto a = fe.forward(tape, video);
  auto b = fe.forward(tape, shifted);
  // rows away from both boundaries (temporal receptive field is +-2 raw
  // frames for two layers; stay 1 stacked row clear of each end)
  for (int64_t t = 1; t + 1 < a->dim(0); ++t) {
    for (int64_t c = 0; c < a->dim(1); ++c) {
      CHECK(b->at(t + 1, c) == doctest::Approx(a->at(t, c)).epsilon(1e-5));
    }
  }
}
