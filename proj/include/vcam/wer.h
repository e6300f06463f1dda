// vcam/wer.h

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

#ifndef VCAM_WER_H_
#define VCAM_WER_H_

#include <cstdint>
#include <vector>

#include "vcam/common.h"

namespace vcam::harness {

struct EditCounts {
  int64_t substitutions = 0;
  int64_t deletions = 0;
  int64_t insertions = 0;
  int64_t ref_len = 0;

  int64_t errors() const { return substitutions + deletions + insertions; }
  EditCounts& operator+=(const EditCounts& o) {
    substitutions += o.substitutions;
    deletions += o.deletions;
    insertions += o.insertions;
    ref_len += o.ref_len;
    return *this;
  }
};

// Minimum-edit-distance alignment with S/D/I accounting. The reference may
// be empty (everything in hyp counts as insertions); used when aggregating
// silent channels.
EditCounts EditDistance(const std::vector<int>& ref,
                        const std::vector<int>& hyp);

// (S + D + I) / |ref|. Throws on an empty reference (WER undefined).
double Wer(const std::vector<int>& ref, const std::vector<int>& hyp);

}  // namespace vcam::harness

#endif  // VCAM_WER_H_
