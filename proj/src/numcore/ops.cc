// numcore/ops.cc

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

#include "vcam/ops.h"

#include <cmath>
#include <cstring>

#include "vcam/kernels.h"

namespace vcam::numcore {

template <class S>
void CheckFinite(const Tensor<S>& t, const char* op_name) {
  if (!kernels::all_finite(t.ptr(), t.numel())) {
    throw Error(std::string(op_name) + " produced a non-finite value");
  }
}

namespace {

template <class S>
void MaybeCheck(const Tape<S>& tape, const Tensor<S>& t, const char* op) {
  if (tape.check_finite) CheckFinite(t, op);
}

template <class S>
bool WantGrad(const Tape<S>& tape, const TensorPtr<S>& a) {
  return tape.grad_enabled && a->requires_grad;
}

template <class S>
bool WantGrad(const Tape<S>& tape, const TensorPtr<S>& a,
              const TensorPtr<S>& b) {
  return tape.grad_enabled && (a->requires_grad || b->requires_grad);
}

}  // namespace

template <class S>
TensorPtr<S> matmul(Tape<S>& tape, const TensorPtr<S>& a,
                    const TensorPtr<S>& b) {
  VCAM_CHECK(a->rank() == 2 && b->rank() == 2, "matmul expects 2-D tensors");
  VCAM_CHECK(a->dim(1) == b->dim(0), "matmul inner extents differ: "
                                         << a->dim(1) << " vs " << b->dim(0));
  const int64_t m = a->dim(0), k = a->dim(1), n = b->dim(1);
  auto out = NewTensor<S>({m, n});
  kernels::matmul_nn(a->ptr(), b->ptr(), out->ptr(), m, k, n, false);
  MaybeCheck(tape, *out, "matmul");
  if (WantGrad(tape, a, b)) {
    out->requires_grad = true;
    tape.record([a, b, out, m, k, n] {
      if (out->grad.empty()) return;
      const S* g = out->grad.data();
      if (a->requires_grad) {
        a->ensure_grad();
        kernels::matmul_nt(g, b->ptr(), a->grad.data(), m, n, k, true);
      }
      if (b->requires_grad) {
        b->ensure_grad();
        kernels::matmul_tn(a->ptr(), g, b->grad.data(), k, m, n, true);
      }
    });
  }
  return out;
}

template <class S>
TensorPtr<S> matmul_nt(Tape<S>& tape, const TensorPtr<S>& a,
                       const TensorPtr<S>& b) {
  VCAM_CHECK(a->rank() == 2 && b->rank() == 2, "matmul_nt expects 2-D tensors");
  VCAM_CHECK(a->dim(1) == b->dim(1), "matmul_nt inner extents differ: "
                                         << a->dim(1) << " vs " << b->dim(1));
  const int64_t m = a->dim(0), k = a->dim(1), n = b->dim(0);
  auto out = NewTensor<S>({m, n});
  kernels::matmul_nt(a->ptr(), b->ptr(), out->ptr(), m, k, n, false);
  MaybeCheck(tape, *out, "matmul_nt");
  if (WantGrad(tape, a, b)) {
    out->requires_grad = true;
    tape.record([a, b, out, m, k, n] {
      if (out->grad.empty()) return;
      const S* g = out->grad.data();
      if (a->requires_grad) {
        a->ensure_grad();
        kernels::matmul_nn(g, b->ptr(), a->grad.data(), m, n, k, true);
      }
      if (b->requires_grad) {
        b->ensure_grad();
        kernels::matmul_tn(g, a->ptr(), b->grad.data(), n, m, k, true);
      }
    });
  }
  return out;
}

template <class S>
TensorPtr<S> add(Tape<S>& tape, const TensorPtr<S>& a, const TensorPtr<S>& b) {
  VCAM_CHECK(a->shape == b->shape, "add requires identical shapes");
  auto out = NewTensor<S>(a->shape);
  kernels::add(a->ptr(), b->ptr(), out->ptr(), a->numel());
  MaybeCheck(tape, *out, "add");
  if (WantGrad(tape, a, b)) {
    out->requires_grad = true;
    tape.record([a, b, out] {
      if (out->grad.empty()) return;
      if (a->requires_grad) {
        a->ensure_grad();
        kernels::axpy(S(1), out->grad.data(), a->grad.data(), a->numel());
      }
      if (b->requires_grad) {
        b->ensure_grad();
        kernels::axpy(S(1), out->grad.data(), b->grad.data(), b->numel());
      }
    });
  }
  return out;
}

template <class S>
TensorPtr<S> sub(Tape<S>& tape, const TensorPtr<S>& a, const TensorPtr<S>& b) {
  VCAM_CHECK(a->shape == b->shape, "sub requires identical shapes");
  auto out = NewTensor<S>(a->shape);
  kernels::sub(a->ptr(), b->ptr(), out->ptr(), a->numel());
  MaybeCheck(tape, *out, "sub");
  if (WantGrad(tape, a, b)) {
    out->requires_grad = true;
    tape.record([a, b, out] {
      if (out->grad.empty()) return;
      if (a->requires_grad) {
        a->ensure_grad();
        kernels::axpy(S(1), out->grad.data(), a->grad.data(), a->numel());
      }
      if (b->requires_grad) {
        b->ensure_grad();
        kernels::axpy(S(-1), out->grad.data(), b->grad.data(), b->numel());
      }
    });
  }
  return out;
}

template <class S>
TensorPtr<S> mul(Tape<S>& tape, const TensorPtr<S>& a, const TensorPtr<S>& b) {
  VCAM_CHECK(a->shape == b->shape, "mul requires identical shapes");
  auto out = NewTensor<S>(a->shape);
  kernels::mul(a->ptr(), b->ptr(), out->ptr(), a->numel());
  MaybeCheck(tape, *out, "mul");
  if (WantGrad(tape, a, b)) {
    out->requires_grad = true;
    tape.record([a, b, out] {
      if (out->grad.empty()) return;
      const S* g = out->grad.data();
      const int64_t n = a->numel();
      if (a->requires_grad) {
        a->ensure_grad();
        for (int64_t i = 0; i < n; ++i) a->grad[i] += g[i] * b->data[i];
      }
      if (b->requires_grad) {
        b->ensure_grad();
        for (int64_t i = 0; i < n; ++i) b->grad[i] += g[i] * a->data[i];
      }
    });
  }
  return out;
}

template <class S>
TensorPtr<S> scale(Tape<S>& tape, const TensorPtr<S>& a, S c) {
  auto out = NewTensor<S>(a->shape);
  kernels::scale(a->ptr(), c, out->ptr(), a->numel());
  MaybeCheck(tape, *out, "scale");
  if (WantGrad(tape, a)) {
    out->requires_grad = true;
    tape.record([a, out, c] {
      if (out->grad.empty()) return;
      a->ensure_grad();
      kernels::axpy(c, out->grad.data(), a->grad.data(), a->numel());
    });
  }
  return out;
}

template <class S>
TensorPtr<S> add_bias(Tape<S>& tape, const TensorPtr<S>& x,
                      const TensorPtr<S>& bias) {
  VCAM_CHECK(x->rank() == 2 && bias->rank() == 1, "add_bias expects [RxC], [C]");
  VCAM_CHECK(x->dim(1) == bias->dim(0), "bias length " << bias->dim(0)
                                                       << " != columns "
                                                       << x->dim(1));
  const int64_t rows = x->dim(0), cols = x->dim(1);
  auto out = NewTensor<S>(x->shape);
  for (int64_t r = 0; r < rows; ++r) {
    kernels::add(x->ptr() + r * cols, bias->ptr(), out->ptr() + r * cols, cols);
  }
  MaybeCheck(tape, *out, "add_bias");
  if (WantGrad(tape, x, bias)) {
    out->requires_grad = true;
    tape.record([x, bias, out, rows, cols] {
      if (out->grad.empty()) return;
      const S* g = out->grad.data();
      if (x->requires_grad) {
        x->ensure_grad();
        kernels::axpy(S(1), g, x->grad.data(), rows * cols);
      }
      if (bias->requires_grad) {
        bias->ensure_grad();
        for (int64_t r = 0; r < rows; ++r) {
          kernels::axpy(S(1), g + r * cols, bias->grad.data(), cols);
        }
      }
    });
  }
  return out;
}

template <class S>
TensorPtr<S> relu(Tape<S>& tape, const TensorPtr<S>& x) {
  auto out = NewTensor<S>(x->shape);
  kernels::relu(x->ptr(), out->ptr(), x->numel());
  MaybeCheck(tape, *out, "relu");
  if (WantGrad(tape, x)) {
    out->requires_grad = true;
    tape.record([x, out] {
      if (out->grad.empty()) return;
      x->ensure_grad();
      const int64_t n = x->numel();
      for (int64_t i = 0; i < n; ++i) {
        if (x->data[i] > S(0)) x->grad[i] += out->grad[i];
      }
    });
  }
  return out;
}

template <class S>
TensorPtr<S> gelu(Tape<S>& tape, const TensorPtr<S>& x) {
  const S inv_sqrt2 = S(0.7071067811865475244);
  auto out = NewTensor<S>(x->shape);
  const int64_t n = x->numel();
  for (int64_t i = 0; i < n; ++i) {
    const S v = x->data[i];
    out->data[i] = S(0.5) * v * (S(1) + std::erf(v * inv_sqrt2));
  }
  MaybeCheck(tape, *out, "gelu");
  if (WantGrad(tape, x)) {
    out->requires_grad = true;
    tape.record([x, out, n, inv_sqrt2] {
      if (out->grad.empty()) return;
      x->ensure_grad();
      const S inv_sqrt2pi = S(0.3989422804014326779);
      for (int64_t i = 0; i < n; ++i) {
        const S v = x->data[i];
        const S cdf = S(0.5) * (S(1) + std::erf(v * inv_sqrt2));
        const S pdf = inv_sqrt2pi * std::exp(S(-0.5) * v * v);
        x->grad[i] += out->grad[i] * (cdf + v * pdf);
      }
    });
  }
  return out;
}

template <class S>
TensorPtr<S> tanh_op(Tape<S>& tape, const TensorPtr<S>& x) {
  auto out = NewTensor<S>(x->shape);
  const int64_t n = x->numel();
  for (int64_t i = 0; i < n; ++i) out->data[i] = std::tanh(x->data[i]);
  MaybeCheck(tape, *out, "tanh");
  if (WantGrad(tape, x)) {
    out->requires_grad = true;
    tape.record([x, out, n] {
      if (out->grad.empty()) return;
      x->ensure_grad();
      for (int64_t i = 0; i < n; ++i) {
        const S y = out->data[i];
        x->grad[i] += out->grad[i] * (S(1) - y * y);
      }
    });
  }
  return out;
}

template <class S>
TensorPtr<S> log_op(Tape<S>& tape, const TensorPtr<S>& x) {
  auto out = NewTensor<S>(x->shape);
  const int64_t n = x->numel();
  for (int64_t i = 0; i < n; ++i) out->data[i] = std::log(x->data[i]);
  MaybeCheck(tape, *out, "log");
  if (WantGrad(tape, x)) {
    out->requires_grad = true;
    tape.record([x, out, n] {
      if (out->grad.empty()) return;
      x->ensure_grad();
      for (int64_t i = 0; i < n; ++i) x->grad[i] += out->grad[i] / x->data[i];
    });
  }
  return out;
}

template <class S>
TensorPtr<S> exp_op(Tape<S>& tape, const TensorPtr<S>& x) {
  auto out = NewTensor<S>(x->shape);
  const int64_t n = x->numel();
  for (int64_t i = 0; i < n; ++i) out->data[i] = std::exp(x->data[i]);
  MaybeCheck(tape, *out, "exp");
  if (WantGrad(tape, x)) {
    out->requires_grad = true;
    tape.record([x, out, n] {
      if (out->grad.empty()) return;
      x->ensure_grad();
      for (int64_t i = 0; i < n; ++i) {
        x->grad[i] += out->grad[i] * out->data[i];
      }
    });
  }
  return out;
}

template <class S>
TensorPtr<S> softmax_rows(Tape<S>& tape, const TensorPtr<S>& x) {
  VCAM_CHECK(x->rank() == 2, "softmax_rows expects a 2-D tensor");
  if (!kernels::all_finite(x->ptr(), x->numel())) {
    throw Error("softmax_rows: non-finite input");
  }
  const int64_t rows = x->dim(0), cols = x->dim(1);
  auto out = NewTensor<S>(x->shape);
  for (int64_t r = 0; r < rows; ++r) {
    const S* xr = x->ptr() + r * cols;
    S* yr = out->ptr() + r * cols;
    const S m = kernels::max_value(xr, cols);
    S s = S(0);
    for (int64_t c = 0; c < cols; ++c) {
      yr[c] = std::exp(xr[c] - m);
      s += yr[c];
    }
    const S inv = S(1) / s;
    kernels::scale(yr, inv, yr, cols);
  }
  MaybeCheck(tape, *out, "softmax_rows");
  if (WantGrad(tape, x)) {
    out->requires_grad = true;
    tape.record([x, out, rows, cols] {
      if (out->grad.empty()) return;
      x->ensure_grad();
      for (int64_t r = 0; r < rows; ++r) {
        const S* y = out->ptr() + r * cols;
        const S* g = out->grad.data() + r * cols;
        S* dx = x->grad.data() + r * cols;
        S dot = S(0);
        for (int64_t c = 0; c < cols; ++c) dot += g[c] * y[c];
        for (int64_t c = 0; c < cols; ++c) dx[c] += y[c] * (g[c] - dot);
      }
    });
  }
  return out;
}

template <class S>
TensorPtr<S> log_softmax_rows(Tape<S>& tape, const TensorPtr<S>& x) {
  VCAM_CHECK(x->rank() == 2, "log_softmax_rows expects a 2-D tensor");
  const int64_t rows = x->dim(0), cols = x->dim(1);
  auto out = NewTensor<S>(x->shape);
  for (int64_t r = 0; r < rows; ++r) {
    const S* xr = x->ptr() + r * cols;
    S* yr = out->ptr() + r * cols;
    const S m = kernels::max_value(xr, cols);
    S s = S(0);
    for (int64_t c = 0; c < cols; ++c) s += std::exp(xr[c] - m);
    const S lse = m + std::log(s);
    for (int64_t c = 0; c < cols; ++c) yr[c] = xr[c] - lse;
  }
  MaybeCheck(tape, *out, "log_softmax_rows");
  if (WantGrad(tape, x)) {
    out->requires_grad = true;
    tape.record([x, out, rows, cols] {
      if (out->grad.empty()) return;
      x->ensure_grad();
      for (int64_t r = 0; r < rows; ++r) {
        const S* y = out->ptr() + r * cols;
        const S* g = out->grad.data() + r * cols;
        S* dx = x->grad.data() + r * cols;
        S gsum = S(0);
        for (int64_t c = 0; c < cols; ++c) gsum += g[c];
        for (int64_t c = 0; c < cols; ++c) {
          dx[c] += g[c] - std::exp(y[c]) * gsum;
        }
      }
    });
  }
  return out;
}

template <class S>
TensorPtr<S> logsumexp_rows(Tape<S>& tape, const TensorPtr<S>& x) {
  VCAM_CHECK(x->rank() == 2, "logsumexp_rows expects a 2-D tensor");
  const int64_t rows = x->dim(0), cols = x->dim(1);
  auto out = NewTensor<S>({rows, 1});
  for (int64_t r = 0; r < rows; ++r) {
    const S* xr = x->ptr() + r * cols;
    const S m = kernels::max_value(xr, cols);
    S s = S(0);
    for (int64_t c = 0; c < cols; ++c) s += std::exp(xr[c] - m);
    out->data[r] = m + std::log(s);
  }
  MaybeCheck(tape, *out, "logsumexp_rows");
  if (WantGrad(tape, x)) {
    out->requires_grad = true;
    tape.record([x, out, rows, cols] {
      if (out->grad.empty()) return;
      x->ensure_grad();
      for (int64_t r = 0; r < rows; ++r) {
        const S* xr = x->ptr() + r * cols;
        S* dx = x->grad.data() + r * cols;
        const S lse = out->data[r];
        const S g = out->grad[r];
        for (int64_t c = 0; c < cols; ++c) {
          dx[c] += g * std::exp(xr[c] - lse);
        }
      }
    });
  }
  return out;
}

template <class S>
TensorPtr<S> layer_norm(Tape<S>& tape, const TensorPtr<S>& x,
                        const TensorPtr<S>& gain, const TensorPtr<S>& bias) {
  VCAM_CHECK(x->rank() == 2, "layer_norm expects a 2-D tensor");
  const int64_t rows = x->dim(0), cols = x->dim(1);
  VCAM_CHECK(gain->rank() == 1 && gain->dim(0) == cols,
             "layer_norm gain must match the last extent");
  VCAM_CHECK(bias->rank() == 1 && bias->dim(0) == cols,
             "layer_norm bias must match the last extent");
  const S eps = S(1e-5);
  auto out = NewTensor<S>(x->shape);
  std::vector<S> mean(rows), inv_std(rows);
  for (int64_t r = 0; r < rows; ++r) {
    const S* xr = x->ptr() + r * cols;
    S mu = kernels::sum(xr, cols) / S(cols);
    S var = S(0);
    for (int64_t c = 0; c < cols; ++c) {
      const S d = xr[c] - mu;
      var += d * d;
    }
    var /= S(cols);
    const S inv = S(1) / std::sqrt(var + eps);
    mean[r] = mu;
    inv_std[r] = inv;
    S* yr = out->ptr() + r * cols;
    for (int64_t c = 0; c < cols; ++c) {
      yr[c] = (xr[c] - mu) * inv * gain->data[c] + bias->data[c];
    }
  }
  MaybeCheck(tape, *out, "layer_norm");
  if (tape.grad_enabled &&
      (x->requires_grad || gain->requires_grad || bias->requires_grad)) {
    out->requires_grad = true;
    tape.record([x, gain, bias, out, rows, cols, mean = std::move(mean),
                 inv_std = std::move(inv_std)] {
      if (out->grad.empty()) return;
      if (x->requires_grad) x->ensure_grad();
      if (gain->requires_grad) gain->ensure_grad();
      if (bias->requires_grad) bias->ensure_grad();
      std::vector<S> xhat(cols), dxhat(cols);
      for (int64_t r = 0; r < rows; ++r) {
        const S* xr = x->ptr() + r * cols;
        const S* g = out->grad.data() + r * cols;
        const S mu = mean[r], inv = inv_std[r];
        S dxhat_sum = S(0), dxhat_dot = S(0);
        for (int64_t c = 0; c < cols; ++c) {
          xhat[c] = (xr[c] - mu) * inv;
          dxhat[c] = g[c] * gain->data[c];
          dxhat_sum += dxhat[c];
          dxhat_dot += dxhat[c] * xhat[c];
        }
        if (gain->requires_grad) {
          for (int64_t c = 0; c < cols; ++c) gain->grad[c] += g[c] * xhat[c];
        }
        if (bias->requires_grad) {
          for (int64_t c = 0; c < cols; ++c) bias->grad[c] += g[c];
        }
        if (x->requires_grad) {
          S* dx = x->grad.data() + r * cols;
          const S inv_cols = S(1) / S(cols);
          for (int64_t c = 0; c < cols; ++c) {
            dx[c] += inv * (dxhat[c] - dxhat_sum * inv_cols -
                            xhat[c] * dxhat_dot * inv_cols);
          }
        }
      }
    });
  }
  return out;
}

template <class S>
TensorPtr<S> embedding(Tape<S>& tape, const TensorPtr<S>& table,
                       const std::vector<int>& ids) {
  VCAM_CHECK(table->rank() == 2, "embedding table must be 2-D");
  const int64_t vocab = table->dim(0), d = table->dim(1);
  const int64_t u = static_cast<int64_t>(ids.size());
  VCAM_CHECK(u > 0, "embedding needs at least one id");
  auto out = NewTensor<S>({u, d});
  for (int64_t i = 0; i < u; ++i) {
    VCAM_CHECK(ids[i] >= 0 && ids[i] < vocab,
               "embedding id " << ids[i] << " outside table of " << vocab);
    std::memcpy(out->ptr() + i * d, table->ptr() + ids[i] * d, sizeof(S) * d);
  }
  MaybeCheck(tape, *out, "embedding");
  if (WantGrad(tape, table)) {
    out->requires_grad = true;
    tape.record([table, out, ids, u, d] {
      if (out->grad.empty()) return;
      table->ensure_grad();
      for (int64_t i = 0; i < u; ++i) {
        kernels::axpy(S(1), out->grad.data() + i * d,
                      table->grad.data() + ids[i] * d, d);
      }
    });
  }
  return out;
}

template <class S>
TensorPtr<S> concat_cols(Tape<S>& tape, const TensorPtr<S>& a,
                         const TensorPtr<S>& b) {
  VCAM_CHECK(a->rank() == 2 && b->rank() == 2, "concat_cols expects 2-D");
  VCAM_CHECK(a->dim(0) == b->dim(0), "concat_cols row counts differ: "
                                         << a->dim(0) << " vs " << b->dim(0));
  const int64_t rows = a->dim(0), ca = a->dim(1), cb = b->dim(1);
  auto out = NewTensor<S>({rows, ca + cb});
  for (int64_t r = 0; r < rows; ++r) {
    std::memcpy(out->ptr() + r * (ca + cb), a->ptr() + r * ca, sizeof(S) * ca);
    std::memcpy(out->ptr() + r * (ca + cb) + ca, b->ptr() + r * cb,
                sizeof(S) * cb);
  }
  if (WantGrad(tape, a, b)) {
    out->requires_grad = true;
    tape.record([a, b, out, rows, ca, cb] {
      if (out->grad.empty()) return;
      const S* g = out->grad.data();
      if (a->requires_grad) {
        a->ensure_grad();
        for (int64_t r = 0; r < rows; ++r) {
          kernels::axpy(S(1), g + r * (ca + cb), a->grad.data() + r * ca, ca);
        }
      }
      if (b->requires_grad) {
        b->ensure_grad();
        for (int64_t r = 0; r < rows; ++r) {
          kernels::axpy(S(1), g + r * (ca + cb) + ca, b->grad.data() + r * cb,
                        cb);
        }
      }
    });
  }
  return out;
}

template <class S>
TensorPtr<S> slice_cols(Tape<S>& tape, const TensorPtr<S>& x, int64_t c0,
                        int64_t c1) {
  VCAM_CHECK(x->rank() == 2, "slice_cols expects 2-D");
  VCAM_CHECK(0 <= c0 && c0 < c1 && c1 <= x->dim(1),
             "bad column slice [" << c0 << "," << c1 << ")");
  const int64_t rows = x->dim(0), cols = x->dim(1), w = c1 - c0;
  auto out = NewTensor<S>({rows, w});
  for (int64_t r = 0; r < rows; ++r) {
    std::memcpy(out->ptr() + r * w, x->ptr() + r * cols + c0, sizeof(S) * w);
  }
  if (WantGrad(tape, x)) {
    out->requires_grad = true;
    tape.record([x, out, rows, cols, c0, w] {
      if (out->grad.empty()) return;
      x->ensure_grad();
      for (int64_t r = 0; r < rows; ++r) {
        kernels::axpy(S(1), out->grad.data() + r * w,
                      x->grad.data() + r * cols + c0, w);
      }
    });
  }
  return out;
}

template <class S>
TensorPtr<S> slice_rows(Tape<S>& tape, const TensorPtr<S>& x, int64_t r0,
                        int64_t r1) {
  VCAM_CHECK(x->rank() == 2, "slice_rows expects 2-D");
  VCAM_CHECK(0 <= r0 && r0 < r1 && r1 <= x->dim(0),
             "bad row slice [" << r0 << "," << r1 << ")");
  const int64_t cols = x->dim(1), h = r1 - r0;
  auto out = NewTensor<S>({h, cols});
  std::memcpy(out->ptr(), x->ptr() + r0 * cols, sizeof(S) * h * cols);
  if (WantGrad(tape, x)) {
    out->requires_grad = true;
    tape.record([x, out, r0, cols, h] {
      if (out->grad.empty()) return;
      x->ensure_grad();
      kernels::axpy(S(1), out->grad.data(), x->grad.data() + r0 * cols,
                    h * cols);
    });
  }
  return out;
}

template <class S>
TensorPtr<S> gather_rows(Tape<S>& tape, const TensorPtr<S>& x,
                         const std::vector<int64_t>& rows) {
  VCAM_CHECK(x->rank() == 2, "gather_rows expects 2-D");
  VCAM_CHECK(!rows.empty(), "gather_rows needs at least one row");
  const int64_t cols = x->dim(1);
  const int64_t n = static_cast<int64_t>(rows.size());
  auto out = NewTensor<S>({n, cols});
  for (int64_t i = 0; i < n; ++i) {
    VCAM_CHECK(rows[i] >= 0 && rows[i] < x->dim(0),
               "gather_rows index " << rows[i] << " out of range");
    std::memcpy(out->ptr() + i * cols, x->ptr() + rows[i] * cols,
                sizeof(S) * cols);
  }
  if (WantGrad(tape, x)) {
    out->requires_grad = true;
    tape.record([x, out, rows, n, cols] {
      if (out->grad.empty()) return;
      x->ensure_grad();
      for (int64_t i = 0; i < n; ++i) {
        kernels::axpy(S(1), out->grad.data() + i * cols,
                      x->grad.data() + rows[i] * cols, cols);
      }
    });
  }
  return out;
}

template <class S>
TensorPtr<S> sum_all(Tape<S>& tape, const TensorPtr<S>& x) {
  auto out = NewTensor<S>({1});
  out->data[0] = kernels::sum(x->ptr(), x->numel());
  MaybeCheck(tape, *out, "sum_all");
  if (WantGrad(tape, x)) {
    out->requires_grad = true;
    tape.record([x, out] {
      if (out->grad.empty()) return;
      x->ensure_grad();
      const S g = out->grad[0];
      const int64_t n = x->numel();
      for (int64_t i = 0; i < n; ++i) x->grad[i] += g;
    });
  }
  return out;
}

template <class S>
TensorPtr<S> pairwise_add(Tape<S>& tape, const TensorPtr<S>& enc,
                          const TensorPtr<S>& pred) {
  VCAM_CHECK(enc->rank() == 2 && pred->rank() == 2, "pairwise_add expects 2-D");
  VCAM_CHECK(enc->dim(1) == pred->dim(1),
             "pairwise_add widths differ: " << enc->dim(1) << " vs "
                                            << pred->dim(1));
  const int64_t t = enc->dim(0), u = pred->dim(0), d = enc->dim(1);
  auto out = NewTensor<S>({t * u, d});
  for (int64_t i = 0; i < t; ++i) {
    for (int64_t j = 0; j < u; ++j) {
      kernels::add(enc->ptr() + i * d, pred->ptr() + j * d,
                   out->ptr() + (i * u + j) * d, d);
    }
  }
  MaybeCheck(tape, *out, "pairwise_add");
  if (WantGrad(tape, enc, pred)) {
    out->requires_grad = true;
    tape.record([enc, pred, out, t, u, d] {
      if (out->grad.empty()) return;
      const S* g = out->grad.data();
      if (enc->requires_grad) {
        enc->ensure_grad();
        for (int64_t i = 0; i < t; ++i) {
          for (int64_t j = 0; j < u; ++j) {
            kernels::axpy(S(1), g + (i * u + j) * d, enc->grad.data() + i * d,
                          d);
          }
        }
      }
      if (pred->requires_grad) {
        pred->ensure_grad();
        for (int64_t i = 0; i < t; ++i) {
          for (int64_t j = 0; j < u; ++j) {
            kernels::axpy(S(1), g + (i * u + j) * d, pred->grad.data() + j * d,
                          d);
          }
        }
      }
    });
  }
  return out;
}

template <class S>
TensorPtr<S> dropout(Tape<S>& tape, const TensorPtr<S>& x, double p,
                     std::mt19937_64& rng) {
  VCAM_CHECK(p >= 0.0 && p < 1.0, "dropout rate must be in [0,1)");
  if (p == 0.0) return x;
  const int64_t n = x->numel();
  auto out = NewTensor<S>(x->shape);
  auto mask = std::make_shared<std::vector<S>>(static_cast<size_t>(n));
  std::bernoulli_distribution keep(1.0 - p);
  const S inv_keep = S(1.0 / (1.0 - p));
  for (int64_t i = 0; i < n; ++i) {
    (*mask)[i] = keep(rng) ? inv_keep : S(0);
    out->data[i] = x->data[i] * (*mask)[i];
  }
  if (WantGrad(tape, x)) {
    out->requires_grad = true;
    tape.record([x, out, mask, n] {
      if (out->grad.empty()) return;
      x->ensure_grad();
      for (int64_t i = 0; i < n; ++i) {
        x->grad[i] += out->grad[i] * (*mask)[i];
      }
    });
  }
  return out;
}

#define VCAM_INSTANTIATE_OPS(S)                                               \
  template void CheckFinite<S>(const Tensor<S>&, const char*);                \
  template TensorPtr<S> matmul<S>(Tape<S>&, const TensorPtr<S>&,             \
                                  const TensorPtr<S>&);                       \
  template TensorPtr<S> matmul_nt<S>(Tape<S>&, const TensorPtr<S>&,          \
                                     const TensorPtr<S>&);                    \
  template TensorPtr<S> add<S>(Tape<S>&, const TensorPtr<S>&,               \
                               const TensorPtr<S>&);                          \
  template TensorPtr<S> sub<S>(Tape<S>&, const TensorPtr<S>&,               \
                               const TensorPtr<S>&);                          \
  template TensorPtr<S> mul<S>(Tape<S>&, const TensorPtr<S>&,               \
                               const TensorPtr<S>&);                          \
  template TensorPtr<S> scale<S>(Tape<S>&, const TensorPtr<S>&, S);         \
  template TensorPtr<S> add_bias<S>(Tape<S>&, const TensorPtr<S>&,          \
                                    const TensorPtr<S>&);                     \
  template TensorPtr<S> relu<S>(Tape<S>&, const TensorPtr<S>&);             \
  template TensorPtr<S> gelu<S>(Tape<S>&, const TensorPtr<S>&);             \
  template TensorPtr<S> tanh_op<S>(Tape<S>&, const TensorPtr<S>&);          \
  template TensorPtr<S> log_op<S>(Tape<S>&, const TensorPtr<S>&);           \
  template TensorPtr<S> exp_op<S>(Tape<S>&, const TensorPtr<S>&);           \
  template TensorPtr<S> softmax_rows<S>(Tape<S>&, const TensorPtr<S>&);     \
  template TensorPtr<S> log_softmax_rows<S>(Tape<S>&, const TensorPtr<S>&); \
  template TensorPtr<S> logsumexp_rows<S>(Tape<S>&, const TensorPtr<S>&);   \
  template TensorPtr<S> layer_norm<S>(Tape<S>&, const TensorPtr<S>&,        \
                                      const TensorPtr<S>&,                    \
                                      const TensorPtr<S>&);                   \
  template TensorPtr<S> embedding<S>(Tape<S>&, const TensorPtr<S>&,         \
                                     const std::vector<int>&);                \
  template TensorPtr<S> concat_cols<S>(Tape<S>&, const TensorPtr<S>&,       \
                                       const TensorPtr<S>&);                  \
  template TensorPtr<S> slice_cols<S>(Tape<S>&, const TensorPtr<S>&,        \
                                      int64_t, int64_t);                      \
  template TensorPtr<S> slice_rows<S>(Tape<S>&, const TensorPtr<S>&,        \
                                      int64_t, int64_t);                      \
  template TensorPtr<S> gather_rows<S>(Tape<S>&, const TensorPtr<S>&,       \
                                       const std::vector<int64_t>&);          \
  template TensorPtr<S> sum_all<S>(Tape<S>&, const TensorPtr<S>&);          \
  template TensorPtr<S> pairwise_add<S>(Tape<S>&, const TensorPtr<S>&,      \
                                        const TensorPtr<S>&);                 \
  template TensorPtr<S> dropout<S>(Tape<S>&, const TensorPtr<S>&, double,   \
                                   std::mt19937_64&);

VCAM_INSTANTIATE_OPS(float)
VCAM_INSTANTIATE_OPS(double)

#undef VCAM_INSTANTIATE_OPS

}  // namespace vcam::numcore
