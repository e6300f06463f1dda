// vcam/tape.h

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

#ifndef VCAM_TAPE_H_
#define VCAM_TAPE_H_

#include <functional>
#include <vector>

#include "vcam/tensor.h"

namespace vcam::numcore {

// Reverse-mode tape. Ops append their backward closures in execution order,
// which is a topological order by construction: an op can only consume
// tensors that already exist. A tape is single-threaded; batch parallelism
// runs one tape per example and sums the resulting gradients.
template <class S>
class Tape {
 public:
  // When false, ops skip recording (inference mode).
  bool grad_enabled = true;
  // When true, every op verifies its output is finite and throws otherwise.
  bool check_finite = true;

  void record(std::function<void()> backward_fn) {
    ops_.push_back(std::move(backward_fn));
  }

  size_t num_ops() const { return ops_.size(); }

  // Seeds d(loss)/d(loss) = 1 and replays the tape in reverse, accumulating
  // into the grad buffer of every tensor that requires one. One backward per
  // tape: to differentiate a combination of losses, sum them into one scalar
  // first.
  void backward(const TensorPtr<S>& loss) {
    VCAM_CHECK(loss->numel() == 1,
               "backward requires a scalar loss, got " << loss->numel()
                                                       << " elements");
    VCAM_CHECK(loss->requires_grad,
               "loss does not depend on any tensor that requires gradients");
    VCAM_CHECK(!backward_done_, "backward already ran on this tape");
    backward_done_ = true;
    loss->ensure_grad();
    loss->grad[0] += S(1);
    for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) (*it)();
  }

 private:
  std::vector<std::function<void()>> ops_;
  bool backward_done_ = false;
};

}  // namespace vcam::numcore

#endif  // VCAM_TAPE_H_
