// vcam/train.h

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

#ifndef VCAM_TRAIN_H_
#define VCAM_TRAIN_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "vcam/config.h"

namespace vcam::harness {

struct TrainStats {
  int steps_run = 0;
  double first_step_loss = 0.0;
  double final_step_loss = 0.0;
  std::vector<std::pair<int, double>> logged;  // (step, mean batch loss)
  double wall_seconds = 0.0;
};

// Minimizes the summed per-channel transducer loss with momentum SGD and
// global gradient-norm clipping. Corpus parameters (vocabulary, bands,
// thumbnail size, frames per token) are adopted from data_dir/corpus.meta.
// The single-channel baseline trains on the TwoFace half of the manifest;
// the multi-talker variants train on all of it. Examples are sharded
// round-robin over cfg.effective_threads() workers and gradients merged in a
// fixed order, so a run is reproducible for a given configuration; with
// single_thread the result is independent of hardware parallelism. Aborts
// with a diagnostic when the loss stops being finite.
TrainStats Train(const RunConfig& cfg, const std::string& data_dir,
                 const std::string& ckpt_out, std::ostream* log = nullptr);

}  // namespace vcam::harness

#endif  // VCAM_TRAIN_H_
