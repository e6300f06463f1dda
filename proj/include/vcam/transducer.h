// vcam/transducer.h

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

#ifndef VCAM_TRANSDUCER_H_
#define VCAM_TRANSDUCER_H_

#include <functional>
#include <vector>

#include "vcam/ops.h"

// Transducer loss and decoding. The lattice is the [T x (U+1) x (V+1)]
// log-probability tensor flattened to [(T*(U+1)) x (V+1)] with rows ordered
// t-major; symbol id 0 is the blank. Standard topology: a blank advances t,
// a label advances u, every path ends with the final blank at (T-1, U).

namespace vcam::transducer {

// -log of the summed probability of all monotone alignments, by a forward
// DP in log space (accumulated in double regardless of S). The gradient with
// respect to every lattice entry comes from the backward DP occupancies.
template <class S>
numcore::TensorPtr<S> rnnt_loss(numcore::Tape<S>& tape,
                                const numcore::TensorPtr<S>& lattice,
                                const std::vector<int>& labels,
                                int64_t num_frames, int blank = 0);

// Sum of the per-channel losses. Channel m's lattice must have been built
// from the mask input for mouth-track m; the channel-to-reference assignment
// is fixed by that identity, there is no permutation search.
template <class S>
numcore::TensorPtr<S> multichannel_loss(
    numcore::Tape<S>& tape, const std::vector<numcore::TensorPtr<S>>& lattices,
    const std::vector<std::vector<int>>& refs, int64_t num_frames,
    int blank = 0);

// Decoded sequence bound to the mouth-track it was decoded against.
struct ChannelHypothesis {
  std::vector<int> tokens;
  int track = 0;
  std::vector<int64_t> frame_emissions;  // 0-based frame per token, ascending
};

// Frame-synchronous greedy walk: at each frame emit the argmax token while it
// is non-blank (capped per frame), advance on blank. argmax_token returns the
// symbol id (blank = 0) given the frame and the prefix decoded so far.
ChannelHypothesis greedy_decode_frames(
    int64_t num_frames, int track, int max_emissions_per_frame,
    const std::function<int(int64_t frame, const std::vector<int>& prefix)>&
        argmax_token);

inline constexpr int kMaxEmissionsPerFrame = 10;

}  // namespace vcam::transducer

#endif  // VCAM_TRANSDUCER_H_
