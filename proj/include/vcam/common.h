// vcam/common.h

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

#ifndef VCAM_COMMON_H_
#define VCAM_COMMON_H_

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

namespace vcam {

// All recoverable failures (bad shapes, bad configs, bad files) throw Error.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// 30 ms audio/video frame period; "seconds" in configs convert at this rate.
constexpr double kFramePeriodSeconds = 0.030;

inline int64_t SecondsToFrames(double seconds) {
  return static_cast<int64_t>(seconds / kFramePeriodSeconds + 0.5);
}

inline double FramesToSeconds(int64_t frames) {
  return static_cast<double>(frames) * kFramePeriodSeconds;
}

}  // namespace vcam

#define VCAM_CHECK(cond, msg)                                    \
  do {                                                           \
    if (!(cond)) {                                               \
      std::ostringstream os_;                                    \
      os_ << "check failed (" #cond "): " << msg;                \
      throw ::vcam::Error(os_.str());                            \
    }                                                            \
  } while (0)

#endif  // VCAM_COMMON_H_
