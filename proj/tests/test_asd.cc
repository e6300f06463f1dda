// tests/test_asd.cc
//
// Frame scoring from attention maps, AP against a threshold-sweep oracle,
// mAP and the PR-curve export.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>

#include "vcam/asd.h"

using namespace vcam;
using namespace vcam::asd;
using numcore::Tensor;

namespace {

// AP by sweeping every distinct score as a threshold and integrating
// precision over recall increments; equal to the rank formula when scores
// are distinct.
double ThresholdSweepAp(const FrameScores& fs) {
  std::vector<float> thresholds = fs.scores;
  std::sort(thresholds.begin(), thresholds.end(), std::greater<float>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());
  int64_t positives = 0;
  for (bool a : fs.active) positives += a ? 1 : 0;
  double ap = 0.0, prev_recall = 0.0;
  for (float th : thresholds) {
    int64_t tp = 0, fp = 0;
    for (size_t j = 0; j < fs.scores.size(); ++j) {
      if (fs.scores[j] >= th) (fs.active[j] ? tp : fp) += 1;
    }
    const double recall = double(tp) / double(positives);
    const double precision = double(tp) / double(tp + fp);
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
  }
  return ap;
}

FrameScores RandomScores(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<float> d(0.0f, 1.0f);
  std::bernoulli_distribution lab(0.4);
  FrameScores fs;
  fs.scores.resize(n);
  fs.active.resize(n);
  fs.overlapped.assign(n, false);
  bool any = false;
  for (int i = 0; i < n; ++i) {
    fs.scores[i] = d(rng);
    fs.active[i] = lab(rng);
    any = any || fs.active[i];
  }
  if (!any) fs.active[0] = true;
  return fs;
}

}  // namespace

TEST_CASE("score_frames: identity, uniform and explicit column max") {
  Tensor<float> eye({4, 4});
  for (int i = 0; i < 4; ++i) eye.at(i, i) = 1.0f;
  auto fs = score_frames(eye, {0, 12}, {0, 0});
  for (float s : fs.scores) CHECK(s == 1.0f);
  for (bool a : fs.active) CHECK(a);

  Tensor<float> uni({4, 4});
  std::fill(uni.data.begin(), uni.data.end(), 0.25f);
  auto fu = score_frames(uni, {0, 6}, {0, 0});
  for (float s : fu.scores) CHECK(s == 0.25f);
  // frames 0,1 have centers 1,4 inside [0,6); frames 2,3 outside
  CHECK(fu.active == std::vector<bool>{true, true, false, false});

  Tensor<float> col({3, 3});
  col.at(0, 1) = 0.1f;
  col.at(1, 1) = 0.7f;
  col.at(2, 1) = 0.2f;
  auto fc = score_frames(col, {0, 9}, {0, 0});
  CHECK(fc.scores[1] == doctest::Approx(0.7f));
}

TEST_CASE("average precision: perfect separation, hand case, all positive") {
  FrameScores perfect;
  perfect.scores = {0.9f, 0.8f, 0.3f, 0.2f};
  perfect.active = {true, true, false, false};
  perfect.overlapped.assign(4, false);
  CHECK(average_precision(perfect) == doctest::Approx(1.0));

  FrameScores hand;
  hand.scores = {0.9f, 0.8f, 0.7f};
  hand.active = {true, false, true};
  hand.overlapped.assign(3, false);
  CHECK(average_precision(hand) == doctest::Approx(0.8333).epsilon(1e-4));

  FrameScores allpos;
  allpos.scores = {0.1f, 0.9f, 0.5f};
  allpos.active = {true, true, true};
  allpos.overlapped.assign(3, false);
  CHECK(average_precision(allpos) == doctest::Approx(1.0));

  FrameScores nopos;
  nopos.scores = {0.5f};
  nopos.active = {false};
  nopos.overlapped = {false};
  CHECK_THROWS_AS(average_precision(nopos), Error);
}

TEST_CASE("rank AP equals threshold-sweep AP on 1000 random sets") {
  std::mt19937_64 rng(2718);
  for (int rep = 0; rep < 1000; ++rep) {
    auto fs = RandomScores(rng, 3 + rep % 60);
    CHECK(average_precision(fs) ==
          doctest::Approx(ThresholdSweepAp(fs)).epsilon(1e-9));
  }
}

TEST_CASE("mAP: single track, mean, monotone-transform invariance") {
  CHECK(map_over_tracks({0.9}) == doctest::Approx(0.9));
  CHECK(map_over_tracks({1.0, 0.8}) == doctest::Approx(0.9));

  std::mt19937_64 rng(7);
  std::vector<FrameScores> tracks;
  for (int i = 0; i < 6; ++i) tracks.push_back(RandomScores(rng, 40));
  std::vector<double> ap1, ap2;
  for (auto fs : tracks) {
    ap1.push_back(average_precision(fs));
    for (auto& s : fs.scores) s = 0.1f + 0.5f * s * s + 0.2f * s;  // monotone
    ap2.push_back(average_precision(fs));
  }
  CHECK(map_over_tracks(ap1) == doctest::Approx(map_over_tracks(ap2)).epsilon(1e-12));
}

TEST_CASE("pr_curve: splits recall by overlap flag and exports") {
  FrameScores t1;
  t1.scores = {0.9f, 0.8f, 0.6f, 0.4f, 0.2f};
  t1.active = {true, true, true, false, false};
  t1.overlapped = {true, false, true, false, false};
  auto curve = pr_curve({t1});
  REQUIRE(!curve.empty());
  // at the lowest threshold everything is predicted: recall 1 everywhere
  const auto& last = curve.back();
  CHECK(last.recall == doctest::Approx(1.0));
  CHECK(last.recall_overlap == doctest::Approx(1.0));
  CHECK(last.recall_nonoverlap == doctest::Approx(1.0));
  // at the top threshold only the 0.9 frame (overlapped, active) fires
  const auto& first = curve.front();
  CHECK(first.recall_overlap > first.recall_nonoverlap);

  CHECK(overlapped_fraction({t1}) == doctest::Approx(2.0 / 5));

  const std::string path = "asd_pr_test.tsv";
  WritePrCurve(path, curve);
  std::ifstream f(path);
  std::string header;
  std::getline(f, header);
  CHECK(header ==
        "threshold\tprecision\trecall\trecall_overlap\trecall_nonoverlap");
  int lines = 0;
  std::string line;
  while (std::getline(f, line)) ++lines;
  CHECK(lines == static_cast<int>(curve.size()));
  std::remove(path.c_str());
}
