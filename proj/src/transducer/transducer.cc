// transducer/transducer.cc

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

#include "vcam/transducer.h"

#include <cmath>
#include <limits>

namespace vcam::transducer {

using namespace vcam::numcore;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double LogSumExp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = a > b ? a : b;
  const double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace

template <class S>
TensorPtr<S> rnnt_loss(Tape<S>& tape, const TensorPtr<S>& lattice,
                       const std::vector<int>& labels, int64_t num_frames,
                       int blank) {
  VCAM_CHECK(lattice->rank() == 2, "lattice must be [(T*(U+1)) x (V+1)]");
  const int64_t t_len = num_frames;
  const int64_t u1 = static_cast<int64_t>(labels.size()) + 1;
  const int64_t v1 = lattice->dim(1);
  VCAM_CHECK(t_len >= 1, "rnnt_loss needs at least one frame");
  VCAM_CHECK(lattice->dim(0) == t_len * u1,
             "lattice rows " << lattice->dim(0) << " != T*(U+1) = "
                             << t_len * u1);
  VCAM_CHECK(blank >= 0 && blank < v1, "blank id outside the symbol set");
  for (int y : labels) {
    VCAM_CHECK(y >= 0 && y < v1 && y != blank,
               "label " << y << " invalid for " << v1 << " symbols");
  }

  const S* lp = lattice->ptr();
  auto at = [&](int64_t t, int64_t u, int k) -> double {
    return static_cast<double>(lp[(t * u1 + u) * v1 + k]);
  };

  // forward scores
  std::vector<double> alpha(static_cast<size_t>(t_len * u1), kNegInf);
  alpha[0] = 0.0;
  for (int64_t t = 0; t < t_len; ++t) {
    for (int64_t u = 0; u < u1; ++u) {
      if (t == 0 && u == 0) continue;
      double a = kNegInf;
      if (t > 0) {
        a = alpha[(t - 1) * u1 + u] + at(t - 1, u, blank);
      }
      if (u > 0) {
        a = LogSumExp(a, alpha[t * u1 + (u - 1)] +
                             at(t, u - 1, labels[static_cast<size_t>(u - 1)]));
      }
      alpha[t * u1 + u] = a;
    }
  }
  const double log_z =
      alpha[(t_len - 1) * u1 + (u1 - 1)] + at(t_len - 1, u1 - 1, blank);

  auto out = NewTensor<S>({1});
  out->data[0] = static_cast<S>(-log_z);
  VCAM_CHECK(std::isfinite(out->data[0]), "rnnt_loss is not finite");

  if (tape.grad_enabled && lattice->requires_grad) {
    out->requires_grad = true;
    tape.record([lattice, out, labels, t_len, u1, v1, blank, log_z,
                 alpha = std::move(alpha)] {
      if (out->grad.empty()) return;
      const double g = static_cast<double>(out->grad[0]);
      const S* lp = lattice->ptr();
      auto at = [&](int64_t t, int64_t u, int k) -> double {
        return static_cast<double>(lp[(t * u1 + u) * v1 + k]);
      };
      // backward scores
      std::vector<double> beta(static_cast<size_t>(t_len * u1), kNegInf);
      beta[(t_len - 1) * u1 + (u1 - 1)] = at(t_len - 1, u1 - 1, blank);
      for (int64_t t = t_len - 1; t >= 0; --t) {
        for (int64_t u = u1 - 1; u >= 0; --u) {
          if (t == t_len - 1 && u == u1 - 1) continue;
          double b = kNegInf;
          if (t + 1 < t_len) {
            b = beta[(t + 1) * u1 + u] + at(t, u, blank);
          }
          if (u + 1 < u1) {
            b = LogSumExp(b, beta[t * u1 + (u + 1)] +
                                 at(t, u, labels[static_cast<size_t>(u)]));
          }
          beta[t * u1 + u] = b;
        }
      }
      lattice->ensure_grad();
      // d(-logZ)/d lp(edge) = -exp(alpha(src) + lp + beta(dst) - logZ);
      // the final blank's continuation score is 0.
      for (int64_t t = 0; t < t_len; ++t) {
        for (int64_t u = 0; u < u1; ++u) {
          const double a = alpha[t * u1 + u];
          if (a == kNegInf) continue;
          S* grow = lattice->grad.data() + (t * u1 + u) * v1;
          if (t + 1 < t_len) {
            const double occ =
                std::exp(a + at(t, u, blank) + beta[(t + 1) * u1 + u] - log_z);
            grow[blank] -= static_cast<S>(g * occ);
          } else if (u == u1 - 1) {
            const double occ = std::exp(a + at(t, u, blank) - log_z);
            grow[blank] -= static_cast<S>(g * occ);
          }
          if (u + 1 < u1) {
            const int y = labels[static_cast<size_t>(u)];
            const double occ =
                std::exp(a + at(t, u, y) + beta[t * u1 + (u + 1)] - log_z);
            grow[y] -= static_cast<S>(g * occ);
          }
        }
      }
    });
  }
  return out;
}

template <class S>
TensorPtr<S> multichannel_loss(Tape<S>& tape,
                               const std::vector<TensorPtr<S>>& lattices,
                               const std::vector<std::vector<int>>& refs,
                               int64_t num_frames, int blank) {
  VCAM_CHECK(!lattices.empty(), "multichannel_loss needs at least one channel");
  VCAM_CHECK(lattices.size() == refs.size(),
             "channel count mismatch: " << lattices.size() << " lattices vs "
                                        << refs.size() << " references");
  TensorPtr<S> total;
  for (size_t m = 0; m < lattices.size(); ++m) {
    auto l = rnnt_loss(tape, lattices[m], refs[m], num_frames, blank);
    total = total ? add(tape, total, l) : l;
  }
  return total;
}

ChannelHypothesis greedy_decode_frames(
    int64_t num_frames, int track, int max_emissions_per_frame,
    const std::function<int(int64_t frame, const std::vector<int>& prefix)>&
        argmax_token) {
  ChannelHypothesis hyp;
  hyp.track = track;
  for (int64_t t = 0; t < num_frames; ++t) {
    int emitted = 0;
    while (emitted < max_emissions_per_frame) {
      const int sym = argmax_token(t, hyp.tokens);
      if (sym == 0) break;  // blank advances to the next frame
      hyp.tokens.push_back(sym);
      hyp.frame_emissions.push_back(t);
      ++emitted;
    }
  }
  return hyp;
}

template TensorPtr<float> rnnt_loss<float>(Tape<float>&,
                                           const TensorPtr<float>&,
                                           const std::vector<int>&, int64_t,
                                           int);
template TensorPtr<double> rnnt_loss<double>(Tape<double>&,
                                             const TensorPtr<double>&,
                                             const std::vector<int>&, int64_t,
                                             int);
template TensorPtr<float> multichannel_loss<float>(
    Tape<float>&, const std::vector<TensorPtr<float>>&,
    const std::vector<std::vector<int>>&, int64_t, int);
template TensorPtr<double> multichannel_loss<double>(
    Tape<double>&, const std::vector<TensorPtr<double>>&,
    const std::vector<std::vector<int>>&, int64_t, int);

}  // namespace vcam::transducer
