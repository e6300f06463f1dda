// vcam/ops.h

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

#ifndef VCAM_OPS_H_
#define VCAM_OPS_H_

#include <cstdint>
#include <random>
#include <vector>

#include "vcam/tape.h"
#include "vcam/tensor.h"

// Differentiable operations. Only what the models need; no general
// broadcasting beyond the trailing-dimension bias add. Shapes are validated
// and violations throw. With tape.check_finite set, every op verifies its
// output is finite.

namespace vcam::numcore {

// out[MxN] = a[MxK] * b[KxN]
template <class S>
TensorPtr<S> matmul(Tape<S>& tape, const TensorPtr<S>& a, const TensorPtr<S>& b);

// out[MxN] = a[MxK] * b[NxK]^T  (rows-by-rows inner products)
template <class S>
TensorPtr<S> matmul_nt(Tape<S>& tape, const TensorPtr<S>& a,
                       const TensorPtr<S>& b);

template <class S>
TensorPtr<S> add(Tape<S>& tape, const TensorPtr<S>& a, const TensorPtr<S>& b);
template <class S>
TensorPtr<S> sub(Tape<S>& tape, const TensorPtr<S>& a, const TensorPtr<S>& b);
template <class S>
TensorPtr<S> mul(Tape<S>& tape, const TensorPtr<S>& a, const TensorPtr<S>& b);
template <class S>
TensorPtr<S> scale(Tape<S>& tape, const TensorPtr<S>& a, S c);

// x[RxC] + bias[C], broadcast over rows.
template <class S>
TensorPtr<S> add_bias(Tape<S>& tape, const TensorPtr<S>& x,
                      const TensorPtr<S>& bias);

template <class S>
TensorPtr<S> relu(Tape<S>& tape, const TensorPtr<S>& x);
template <class S>
TensorPtr<S> gelu(Tape<S>& tape, const TensorPtr<S>& x);
template <class S>
TensorPtr<S> tanh_op(Tape<S>& tape, const TensorPtr<S>& x);
template <class S>
TensorPtr<S> log_op(Tape<S>& tape, const TensorPtr<S>& x);
template <class S>
TensorPtr<S> exp_op(Tape<S>& tape, const TensorPtr<S>& x);

// Row-wise softmax family over the last axis of a 2-D tensor. All use
// per-row max subtraction; softmax_rows requires finite input.
template <class S>
TensorPtr<S> softmax_rows(Tape<S>& tape, const TensorPtr<S>& x);
template <class S>
TensorPtr<S> log_softmax_rows(Tape<S>& tape, const TensorPtr<S>& x);
template <class S>
TensorPtr<S> logsumexp_rows(Tape<S>& tape, const TensorPtr<S>& x);  // [Rx1]

// Per-row normalization to zero mean / unit variance over the last axis,
// then the affine map gain, bias (both [C]). Epsilon 1e-5 inside the sqrt.
template <class S>
TensorPtr<S> layer_norm(Tape<S>& tape, const TensorPtr<S>& x,
                        const TensorPtr<S>& gain, const TensorPtr<S>& bias);

// Row lookup: out[u] = table[ids[u]].
template <class S>
TensorPtr<S> embedding(Tape<S>& tape, const TensorPtr<S>& table,
                       const std::vector<int>& ids);

template <class S>
TensorPtr<S> concat_cols(Tape<S>& tape, const TensorPtr<S>& a,
                         const TensorPtr<S>& b);
template <class S>
TensorPtr<S> slice_cols(Tape<S>& tape, const TensorPtr<S>& x, int64_t c0,
                        int64_t c1);
template <class S>
TensorPtr<S> slice_rows(Tape<S>& tape, const TensorPtr<S>& x, int64_t r0,
                        int64_t r1);
template <class S>
TensorPtr<S> gather_rows(Tape<S>& tape, const TensorPtr<S>& x,
                         const std::vector<int64_t>& rows);

template <class S>
TensorPtr<S> sum_all(Tape<S>& tape, const TensorPtr<S>& x);  // scalar [1]

// out[t*U + u] = enc[t] + pred[u]; the joint-network lattice expansion.
// enc is [TxD], pred is [UxD], out is [(T*U)xD].
template <class S>
TensorPtr<S> pairwise_add(Tape<S>& tape, const TensorPtr<S>& enc,
                          const TensorPtr<S>& pred);

// Inverted-dropout. Active only when p > 0; scales kept entries by 1/(1-p).
template <class S>
TensorPtr<S> dropout(Tape<S>& tape, const TensorPtr<S>& x, double p,
                     std::mt19937_64& rng);

// 2-D convolution over each frame of x[F x Cin x H x W] with
// w[Cout x Cin x Kh x Kw], zero padding, square stride.
template <class S>
TensorPtr<S> conv2d(Tape<S>& tape, const TensorPtr<S>& x, const TensorPtr<S>& w,
                    const TensorPtr<S>& bias, int stride, int pad);

// 1-D convolution across the frame axis of x[F x C x H x W] with
// w[Cout x Cin x Kt], stride 1, zero padding.
template <class S>
TensorPtr<S> conv1d_time(Tape<S>& tape, const TensorPtr<S>& x,
                         const TensorPtr<S>& w, const TensorPtr<S>& bias,
                         int pad);

// Global spatial average: x[F x C x H x W] -> [F x C].
template <class S>
TensorPtr<S> mean_spatial(Tape<S>& tape, const TensorPtr<S>& x);

// Throws if t contains a non-finite value.
template <class S>
void CheckFinite(const Tensor<S>& t, const char* op_name);

}  // namespace vcam::numcore

#endif  // VCAM_OPS_H_
