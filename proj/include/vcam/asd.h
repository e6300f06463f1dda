// vcam/asd.h

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

#ifndef VCAM_ASD_H_
#define VCAM_ASD_H_

#include <array>
#include <string>
#include <vector>

#include "vcam/tensor.h"

// Active-speaker detection from attention maps: a visual frame of a
// mouth-track counts as active speech when the maximum attention weight it
// receives from any audio frame exceeds a threshold. Scored against the
// manifest speech intervals with precision/recall and mean average precision.

namespace vcam::asd {

struct FrameScores {
  std::vector<float> scores;     // per visual frame: column max of the map
  std::vector<bool> active;      // ground truth from the speech interval
  std::vector<bool> overlapped;  // frame lies inside the overlap interval
};

// attention: T x T map, rows = audio frames, columns = visual frames, rows
// softmax-normalized. Intervals are in raw 30 ms frames; an encoded frame j
// covers raw frames [3j, 3j+3) and is labeled by its center 3j+1.
FrameScores score_frames(const numcore::Tensor<float>& attention,
                         std::array<int64_t, 2> speech_interval,
                         std::array<int64_t, 2> overlap_interval);

// Rank-based average precision: frames sorted by descending score (ties by
// frame index), AP = mean of precision-at-rank over the positives. Throws
// when no frame is positive (AP undefined).
double average_precision(const FrameScores& frames);

// Unweighted mean over per-track APs.
double map_over_tracks(const std::vector<double>& per_track_aps);

struct PRPoint {
  double threshold = 0;
  double precision = 0;
  double recall = 0;
  double recall_overlap = 0;     // recall over positives inside overlaps
  double recall_nonoverlap = 0;  // recall over positives outside overlaps
};

// Pooled precision/recall over all frames of all tracks, swept over the
// distinct scores (evenly subsampled to at most max_thresholds).
std::vector<PRPoint> pr_curve(const std::vector<FrameScores>& tracks,
                              size_t max_thresholds = 1024);

// Fraction of frames (pooled) that lie inside an overlap interval.
double overlapped_fraction(const std::vector<FrameScores>& tracks);

// Tab-separated: threshold, precision, recall, recall_overlap,
// recall_nonoverlap; one header line.
void WritePrCurve(const std::string& path, const std::vector<PRPoint>& curve);

}  // namespace vcam::asd

#endif  // VCAM_ASD_H_
