// vcam/evaluate.h

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

#ifndef VCAM_EVALUATE_H_
#define VCAM_EVALUATE_H_

#include <string>
#include <vector>

#include "vcam/asd.h"
#include "vcam/model.h"
#include "vcam/wer.h"

namespace vcam::harness {

struct SetReport {
  std::string name;  // Overlap | Single-TwoFace | Single-OneFace
  int64_t num_examples = 0;
  EditCounts total;                      // S+D+I over all channels
  std::vector<EditCounts> per_channel;   // channel-aggregated counts

  double wer() const {
    return total.ref_len > 0
               ? static_cast<double>(total.errors()) / double(total.ref_len)
               : 0.0;
  }
};

struct EvalReport {
  std::string variant;
  std::vector<SetReport> sets;
  // attention-based active-speaker detection, Overlap set, VCAM only
  bool has_asd = false;
  double map = 0.0;
  double overlap_frame_fraction = 0.0;
  double frac_tracks_in_gt_out = 0.0;  // in-interval mean > out-interval mean
  std::vector<asd::PRPoint> pr;
  double wall_seconds = 0.0;
};

// Greedy-decodes every channel of every example of the three test manifests
// under data_dir, pairing hypothesis channel m with reference channel m.
// Insertions against silent (empty-reference) channels count toward the
// aggregate. ASD metrics are computed from the attention maps when the
// variant produces them.
EvalReport Evaluate(const MultiTalkerModel<float>& model,
                    const std::string& data_dir, int threads = 1);

// Tab-separated table plus a line-delimited JSON log next to it
// (path + ".jsonl"). The VCAM precision/recall curve goes to
// path_prefix_pr.tsv when present.
void WriteReport(const EvalReport& report, const std::string& tsv_path);

}  // namespace vcam::harness

#endif  // VCAM_EVALUATE_H_
