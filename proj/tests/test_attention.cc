// tests/test_attention.cc
//
// The visual context attention pieces: inner-product similarity against a
// loop oracle (bitwise, on both kernel paths), softmax weight contracts,
// convexity of the context rows, mask-input assembly and the PGM export.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "testutil.h"
#include "vcam/attention.h"
#include "vcam/kernels.h"

using namespace vcam;
using namespace vcam::numcore;
using namespace vcam::attention;
using vcam::testutil::FillUniform;

TEST_CASE("similarity: unit vectors, orthogonality, identity rows") {
  Tape<float> tape;
  auto a = NewTensor<float>({1, 3}, {1, 0, 0});
  auto v = NewTensor<float>({1, 3}, {1, 0, 0});
  CHECK(similarity(tape, a, v)->data[0] == 1.0f);

  auto v2 = NewTensor<float>({1, 3}, {0, 1, 0});
  CHECK(similarity(tape, a, v2)->data[0] == 0.0f);

  auto eye_a = NewTensor<float>({2, 2}, {1, 0, 0, 1});
  auto eye_v = NewTensor<float>({2, 2}, {1, 0, 0, 1});
  auto s = similarity(tape, eye_a, eye_v);
  CHECK(s->data == std::vector<float>{1, 0, 0, 1});
}

TEST_CASE("similarity equals the loop oracle bitwise on both kernel paths") {
  const auto saved = kernels::active_isa();
  std::mt19937_64 rng(31);
  const int64_t t = 13, d = 37;
  auto a = NewTensor<float>({t, d});
  auto v = NewTensor<float>({t, d});
  FillUniform(rng, a->data, -1.0f, 1.0f);
  FillUniform(rng, v->data, -1.0f, 1.0f);

  // plain inner products, ascending feature index
  std::vector<float> want(static_cast<size_t>(t * t));
  for (int64_t i = 0; i < t; ++i) {
    for (int64_t j = 0; j < t; ++j) {
      float s = 0.0f;
      for (int64_t k = 0; k < d; ++k) s += a->at(i, k) * v->at(j, k);
      want[static_cast<size_t>(i * t + j)] = s;
    }
  }

  for (auto isa : {kernels::Isa::kScalar, kernels::Isa::kAvx2}) {
    if (kernels::set_isa(isa) != isa) continue;
    Tape<float> tape;
    auto s = similarity(tape, a, v);
    CHECK(s->data == want);
  }
  kernels::set_isa(saved);

  // the config-gated temperature is a different map and defaults off
  Tape<float> tape;
  auto st = similarity(tape, a, v, /*with_temperature=*/true);
  CHECK(st->data != want);
}

TEST_CASE("attention weights: uniform, closed form, shift invariance") {
  Tape<float> tape;
  auto z = NewTensor<float>({3, 3});
  auto w = attention_weights(tape, z);
  for (float v : w->data) CHECK(v == doctest::Approx(1.0f / 3).epsilon(1e-6));

  auto s = NewTensor<float>({1, 2}, {2, 0});
  auto w2 = attention_weights(tape, s);
  CHECK(w2->data[0] == doctest::Approx(0.88080).epsilon(1e-4));
  CHECK(w2->data[1] == doctest::Approx(0.11920).epsilon(1e-4));

  auto s3 = NewTensor<float>({1, 2}, {2 - 3.25f, 0 - 3.25f});
  auto w3 = attention_weights(tape, s3);
  CHECK(w3->data[0] == doctest::Approx(w2->data[0]).epsilon(1e-6));
}

TEST_CASE("attention rows sum to one on random inputs") {
  std::mt19937_64 rng(5);
  Tape<float> tape;
  auto a = NewTensor<float>({17, 24});
  auto v = NewTensor<float>({17, 24});
  FillUniform(rng, a->data, -2.0f, 2.0f);
  FillUniform(rng, v->data, -2.0f, 2.0f);
  auto w = attention_weights(tape, similarity(tape, a, v));
  for (int64_t r = 0; r < 17; ++r) {
    float s = 0;
    for (int64_t c = 0; c < 17; ++c) s += w->at(r, c);
    CHECK(s == doctest::Approx(1.0f).epsilon(1e-6));
    for (int64_t c = 0; c < 17; ++c) CHECK(w->at(r, c) >= 0.0f);
  }
}

TEST_CASE("visual context: selection, averaging, hand product") {
  Tape<float> tape;
  auto v = NewTensor<float>({3, 2}, {1, 2, 3, 4, 5, 6});

  auto sel = NewTensor<float>({2, 3}, {0, 0, 1, 0, 1, 0});
  auto ctx = visual_context(tape, sel, v);
  CHECK(ctx->data == std::vector<float>{5, 6, 3, 4});

  auto uni = NewTensor<float>({1, 3}, {1.f / 3, 1.f / 3, 1.f / 3});
  auto mean = visual_context(tape, uni, v);
  CHECK(mean->data[0] == doctest::Approx(3.0f));
  CHECK(mean->data[1] == doctest::Approx(4.0f));

  auto w = NewTensor<float>({2, 2}, {0.75f, 0.25f, 0.25f, 0.75f});
  auto v2 = NewTensor<float>({2, 2}, {1, 0, 0, 1});
  auto c2 = visual_context(tape, w, v2);
  CHECK(c2->data == std::vector<float>{0.75f, 0.25f, 0.25f, 0.75f});
}

TEST_CASE("context rows stay in the convex hull of the visual rows") {
  std::mt19937_64 rng(6);
  Tape<float> tape;
  auto a = NewTensor<float>({9, 12});
  auto v = NewTensor<float>({9, 12});
  FillUniform(rng, a->data, -2.0f, 2.0f);
  FillUniform(rng, v->data, -2.0f, 2.0f);
  auto w = attention_weights(tape, similarity(tape, a, v));
  auto ctx = visual_context(tape, w, v);
  for (int64_t c = 0; c < 12; ++c) {
    float lo = v->at(0, c), hi = v->at(0, c);
    for (int64_t r = 1; r < 9; ++r) {
      lo = std::min(lo, v->at(r, c));
      hi = std::max(hi, v->at(r, c));
    }
    for (int64_t r = 0; r < 9; ++r) {
      CHECK(ctx->at(r, c) >= lo - 1e-5f);
      CHECK(ctx->at(r, c) <= hi + 1e-5f);
    }
  }
}

TEST_CASE("permuting visual rows with inverse-permuted weights is a no-op") {
  std::mt19937_64 rng(7);
  Tape<float> tape;
  const int64_t t = 6, d = 8;
  auto a = NewTensor<float>({t, d});
  auto v = NewTensor<float>({t, d});
  FillUniform(rng, a->data, -1.0f, 1.0f);
  FillUniform(rng, v->data, -1.0f, 1.0f);
  auto w = attention_weights(tape, similarity(tape, a, v));
  auto ctx = visual_context(tape, w, v);

  std::vector<int64_t> perm{3, 5, 0, 2, 4, 1};
  auto vp = NewTensor<float>({t, d});
  auto wp = NewTensor<float>({t, t});
  for (int64_t i = 0; i < t; ++i) {
    for (int64_t c = 0; c < d; ++c) vp->at(i, c) = v->at(perm[i], c);
  }
  for (int64_t r = 0; r < t; ++r) {
    for (int64_t i = 0; i < t; ++i) wp->at(r, i) = w->at(r, perm[i]);
  }
  auto ctx_p = visual_context(tape, wp, vp);
  for (size_t i = 0; i < ctx->data.size(); ++i) {
    CHECK(ctx_p->data[i] == doctest::Approx(ctx->data[i]).epsilon(1e-5));
  }
}

TEST_CASE("mask input assembly: vcam concat and channel one-hot") {
  Tape<float> tape;
  auto a = NewTensor<float>({3, 2}, {1, 2, 3, 4, 5, 6});
  auto c = NewTensor<float>({3, 2}, {9, 8, 7, 6, 5, 4});
  auto mi = mask_input_vcam(tape, a, c);
  CHECK(mi->shape == std::vector<int64_t>{3, 4});
  CHECK(mi->at(0, 0) == 1.0f);
  CHECK(mi->at(0, 2) == 9.0f);

  auto zero_ctx = NewTensor<float>({3, 2});
  auto mz = mask_input_vcam(tape, a, zero_ctx);
  for (int64_t r = 0; r < 3; ++r) {
    CHECK(mz->at(r, 2) == 0.0f);
    CHECK(mz->at(r, 3) == 0.0f);
    CHECK(mz->at(r, 0) == a->at(r, 0));
  }

  auto m0 = mask_input_audio_only(tape, a, 0, 2);
  auto m1 = mask_input_audio_only(tape, a, 1, 2);
  for (int64_t r = 0; r < 3; ++r) {
    CHECK(m0->at(r, 2) == 1.0f);
    CHECK(m0->at(r, 3) == 0.0f);
    CHECK(m1->at(r, 2) == 0.0f);
    CHECK(m1->at(r, 3) == 1.0f);
    // channels differ only in the trailing one-hot
    CHECK(m0->at(r, 0) == m1->at(r, 0));
    CHECK(m0->at(r, 1) == m1->at(r, 1));
  }
  CHECK_THROWS_AS(mask_input_audio_only(tape, a, 2, 2), Error);
}

TEST_CASE("PGM export: header, size, determinism") {
  Tensor<float> map({3, 3});
  map.data = {0.5f, 0.25f, 0.25f, 0.0f, 1.0f, 0.0f, 0.1f, 0.2f, 0.7f};
  const std::string path = "attn_test.pgm";
  WritePgm(path, map);

  std::ifstream f(path, std::ios::binary);
  std::string magic, dims1, dims2, maxval;
  f >> magic >> dims1 >> dims2 >> maxval;
  CHECK(magic == "P5");
  CHECK(dims1 == "3");
  CHECK(dims2 == "3");
  CHECK(maxval == "255");
  f.get();  // single whitespace after the header
  std::vector<unsigned char> pix(9);
  f.read(reinterpret_cast<char*>(pix.data()), 9);
  CHECK(f.good());
  CHECK(pix[0] == 255);  // row max scales to 255
  CHECK(pix[4] == 255);
  CHECK(pix[8] == 255);

  WritePgm("attn_test2.pgm", map);
  std::ifstream f1(path, std::ios::binary), f2("attn_test2.pgm", std::ios::binary);
  std::string s1((std::istreambuf_iterator<char>(f1)), {});
  std::string s2((std::istreambuf_iterator<char>(f2)), {});
  CHECK(s1 == s2);
  std::remove(path.c_str());
  std::remove("attn_test2.pgm");
}
