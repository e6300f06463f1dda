// harness/wer.cc

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

#include "vcam/wer.h"

namespace vcam::harness {

EditCounts EditDistance(const std::vector<int>& ref,
                        const std::vector<int>& hyp) {
  const size_t n = ref.size(), m = hyp.size();
  EditCounts out;
  out.ref_len = static_cast<int64_t>(n);
  if (n == 0) {
    out.insertions = static_cast<int64_t>(m);
    return out;
  }
  // cost matrix plus backtrace over {match/sub, del, ins}
  std::vector<int32_t> cost((n + 1) * (m + 1));
  std::vector<int8_t> from((n + 1) * (m + 1));
  auto idx = [m](size_t i, size_t j) { return i * (m + 1) + j; };
  enum { kDiag = 0, kDel = 1, kIns = 2 };
  for (size_t i = 0; i <= n; ++i) {
    cost[idx(i, 0)] = static_cast<int32_t>(i);
    from[idx(i, 0)] = kDel;
  }
  for (size_t j = 0; j <= m; ++j) {
    cost[idx(0, j)] = static_cast<int32_t>(j);
    from[idx(0, j)] = kIns;
  }
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      const int32_t diag =
          cost[idx(i - 1, j - 1)] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      const int32_t del = cost[idx(i - 1, j)] + 1;
      const int32_t ins = cost[idx(i, j - 1)] + 1;
      int32_t best = diag;
      int8_t who = kDiag;
      if (del < best) {
        best = del;
        who = kDel;
      }
      if (ins < best) {
        best = ins;
        who = kIns;
      }
      cost[idx(i, j)] = best;
      from[idx(i, j)] = who;
    }
  }
  size_t i = n, j = m;
  while (i > 0 || j > 0) {
    switch (from[idx(i, j)]) {
      case kDiag:
        if (ref[i - 1] != hyp[j - 1]) ++out.substitutions;
        --i;
        --j;
        break;
      case kDel:
        ++out.deletions;
        --i;
        break;
      default:
        ++out.insertions;
        --j;
        break;
    }
  }
  return out;
}

double Wer(const std::vector<int>& ref, const std::vector<int>& hyp) {
  VCAM_CHECK(!ref.empty(), "WER undefined for an empty reference");
  const auto c = EditDistance(ref, hyp);
  return static_cast<double>(c.errors()) / static_cast<double>(c.ref_len);
}

}  // namespace vcam::harness
