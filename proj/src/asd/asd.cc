// asd/asd.cc

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

#include "vcam/asd.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>

namespace vcam::asd {

FrameScores score_frames(const numcore::Tensor<float>& attention,
                         std::array<int64_t, 2> speech_interval,
                         std::array<int64_t, 2> overlap_interval) {
  VCAM_CHECK(attention.rank() == 2 && attention.dim(0) == attention.dim(1),
             "attention map must be square");
  const int64_t t = attention.dim(0);
  FrameScores fs;
  fs.scores.resize(static_cast<size_t>(t));
  fs.active.resize(static_cast<size_t>(t));
  fs.overlapped.resize(static_cast<size_t>(t));
  for (int64_t j = 0; j < t; ++j) {
    float mx = 0.0f;
    for (int64_t i = 0; i < t; ++i) {
      const float w = attention.at(i, j);
      mx = w > mx ? w : mx;
    }
    fs.scores[static_cast<size_t>(j)] = mx;
    const int64_t center = 3 * j + 1;  // raw-rate center of the triplet
    fs.active[static_cast<size_t>(j)] =
        center >= speech_interval[0] && center < speech_interval[1];
    fs.overlapped[static_cast<size_t>(j)] =
        center >= overlap_interval[0] && center < overlap_interval[1];
  }
  return fs;
}

double average_precision(const FrameScores& frames) {
  const size_t n = frames.scores.size();
  VCAM_CHECK(n > 0, "no frames to score");
  size_t positives = 0;
  for (bool a : frames.active) positives += a ? 1 : 0;
  if (positives == 0) {
    throw Error("average_precision undefined: no positive frames");
  }
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return frames.scores[a] > frames.scores[b];
  });
  double ap = 0.0;
  size_t hits = 0;
  for (size_t rank = 0; rank < n; ++rank) {
    if (frames.active[order[rank]]) {
      ++hits;
      ap += static_cast<double>(hits) / static_cast<double>(rank + 1);
    }
  }
  return ap / static_cast<double>(positives);
}

double map_over_tracks(const std::vector<double>& per_track_aps) {
  VCAM_CHECK(!per_track_aps.empty(), "mAP needs at least one track");
  double s = 0.0;
  for (double ap : per_track_aps) s += ap;
  return s / static_cast<double>(per_track_aps.size());
}

std::vector<PRPoint> pr_curve(const std::vector<FrameScores>& tracks,
                              size_t max_thresholds) {
  std::vector<float> scores;
  int64_t pos = 0, pos_ov = 0, pos_nov = 0;
  for (const auto& t : tracks) {
    for (size_t j = 0; j < t.scores.size(); ++j) {
      scores.push_back(t.scores[j]);
      if (t.active[j]) {
        ++pos;
        (t.overlapped[j] ? pos_ov : pos_nov) += 1;
      }
    }
  }
  VCAM_CHECK(!scores.empty(), "pr_curve needs frames");
  std::sort(scores.begin(), scores.end(), std::greater<float>());
  scores.erase(std::unique(scores.begin(), scores.end()), scores.end());
  std::vector<float> thresholds;
  if (scores.size() <= max_thresholds) {
    thresholds = scores;
  } else {
    for (size_t i = 0; i < max_thresholds; ++i) {
      thresholds.push_back(scores[i * scores.size() / max_thresholds]);
    }
  }

  std::vector<PRPoint> curve;
  for (float th : thresholds) {
    int64_t tp = 0, fp = 0, tp_ov = 0, tp_nov = 0;
    for (const auto& t : tracks) {
      for (size_t j = 0; j < t.scores.size(); ++j) {
        if (t.scores[j] < th) continue;
        if (t.active[j]) {
          ++tp;
          (t.overlapped[j] ? tp_ov : tp_nov) += 1;
        } else {
          ++fp;
        }
      }
    }
    PRPoint p;
    p.threshold = th;
    p.precision = tp + fp > 0 ? double(tp) / double(tp + fp) : 1.0;
    p.recall = pos > 0 ? double(tp) / double(pos) : 0.0;
    p.recall_overlap = pos_ov > 0 ? double(tp_ov) / double(pos_ov) : 0.0;
    p.recall_nonoverlap = pos_nov > 0 ? double(tp_nov) / double(pos_nov) : 0.0;
    curve.push_back(p);
  }
  return curve;
}

double overlapped_fraction(const std::vector<FrameScores>& tracks) {
  int64_t total = 0, overlapped = 0;
  for (const auto& t : tracks) {
    total += static_cast<int64_t>(t.overlapped.size());
    for (bool o : t.overlapped) overlapped += o ? 1 : 0;
  }
  VCAM_CHECK(total > 0, "no frames");
  return static_cast<double>(overlapped) / static_cast<double>(total);
}

void WritePrCurve(const std::string& path, const std::vector<PRPoint>& curve) {
  std::ofstream f(path, std::ios::trunc);
  VCAM_CHECK(f.good(), "cannot open " << path);
  f << "threshold\tprecision\trecall\trecall_overlap\trecall_nonoverlap\n";
  char buf[160];
  for (const auto& p : curve) {
    std::snprintf(buf, sizeof(buf), "%.6f\t%.6f\t%.6f\t%.6f\t%.6f\n",
                  p.threshold, p.precision, p.recall, p.recall_overlap,
                  p.recall_nonoverlap);
    f << buf;
  }
  VCAM_CHECK(f.good(), "write failed for " << path);
}

}  // namespace vcam::asd
