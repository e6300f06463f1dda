// numcore/ops_conv.cc

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

#include <cmath>
#include <cstring>

#include "vcam/kernels.h"
#include "vcam/ops.h"

namespace vcam::numcore {

namespace {

// Lowers one frame to a [Cin*Kh*Kw x Ho*Wo] patch matrix so the spatial
// convolution runs as a matrix product against w viewed as [Cout x Cin*Kh*Kw].
template <class S>
void Im2Col(const S* frame, int64_t cin, int64_t h, int64_t w, int64_t kh,
            int64_t kw, int stride, int pad, int64_t ho, int64_t wo, S* col) {
  int64_t row = 0;
  for (int64_t ci = 0; ci < cin; ++ci) {
    const S* plane = frame + ci * h * w;
    for (int64_t dy = 0; dy < kh; ++dy) {
      for (int64_t dx = 0; dx < kw; ++dx, ++row) {
        S* out = col + row * (ho * wo);
        for (int64_t oy = 0; oy < ho; ++oy) {
          const int64_t iy = oy * stride + dy - pad;
          for (int64_t ox = 0; ox < wo; ++ox) {
            const int64_t ix = ox * stride + dx - pad;
            out[oy * wo + ox] =
                (iy >= 0 && iy < h && ix >= 0 && ix < w) ? plane[iy * w + ix]
                                                         : S(0);
          }
        }
      }
    }
  }
}

template <class S>
void Col2ImAdd(const S* col, int64_t cin, int64_t h, int64_t w, int64_t kh,
               int64_t kw, int stride, int pad, int64_t ho, int64_t wo,
               S* frame_grad) {
  int64_t row = 0;
  for (int64_t ci = 0; ci < cin; ++ci) {
    S* plane = frame_grad + ci * h * w;
    for (int64_t dy = 0; dy < kh; ++dy) {
      for (int64_t dx = 0; dx < kw; ++dx, ++row) {
        const S* in = col + row * (ho * wo);
        for (int64_t oy = 0; oy < ho; ++oy) {
          const int64_t iy = oy * stride + dy - pad;
          if (iy < 0 || iy >= h) continue;
          for (int64_t ox = 0; ox < wo; ++ox) {
            const int64_t ix = ox * stride + dx - pad;
            if (ix < 0 || ix >= w) continue;
            plane[iy * w + ix] += in[oy * wo + ox];
          }
        }
      }
    }
  }
}

}  // namespace

template <class S>
TensorPtr<S> conv2d(Tape<S>& tape, const TensorPtr<S>& x, const TensorPtr<S>& w,
                    const TensorPtr<S>& bias, int stride, int pad) {
  VCAM_CHECK(x->rank() == 4, "conv2d input must be [F x C x H x W]");
  VCAM_CHECK(w->rank() == 4, "conv2d weight must be [Cout x Cin x Kh x Kw]");
  const int64_t f = x->dim(0), cin = x->dim(1), h = x->dim(2), wd = x->dim(3);
  const int64_t cout = w->dim(0), kh = w->dim(2), kw = w->dim(3);
  VCAM_CHECK(w->dim(1) == cin, "conv2d channel mismatch: " << w->dim(1)
                                                           << " vs " << cin);
  VCAM_CHECK(bias->rank() == 1 && bias->dim(0) == cout, "conv2d bias mismatch");
  VCAM_CHECK(h >= kh && wd >= kw,
             "conv2d spatial extent " << h << "x" << wd
                                      << " smaller than kernel " << kh << "x"
                                      << kw);
  VCAM_CHECK(stride >= 1 && pad >= 0, "conv2d bad stride/pad");
  const int64_t ho = (h + 2 * pad - kh) / stride + 1;
  const int64_t wo = (wd + 2 * pad - kw) / stride + 1;
  const int64_t ckk = cin * kh * kw;
  const int64_t plane = ho * wo;

  auto out = NewTensor<S>({f, cout, ho, wo});
  std::vector<S> col(static_cast<size_t>(ckk * plane));
  for (int64_t fr = 0; fr < f; ++fr) {
    Im2Col(x->ptr() + fr * cin * h * wd, cin, h, wd, kh, kw, stride, pad, ho,
           wo, col.data());
    S* oframe = out->ptr() + fr * cout * plane;
    kernels::matmul_nn(w->ptr(), col.data(), oframe, cout, ckk, plane, false);
    for (int64_t co = 0; co < cout; ++co) {
      const S b = bias->data[co];
      S* orow = oframe + co * plane;
      for (int64_t j = 0; j < plane; ++j) orow[j] += b;
    }
  }
  if (tape.check_finite) CheckFinite(*out, "conv2d");

  if (tape.grad_enabled &&
      (x->requires_grad || w->requires_grad || bias->requires_grad)) {
    out->requires_grad = true;
    tape.record([x, w, bias, out, f, cin, h, wd, cout, kh, kw, stride, pad, ho,
                 wo, ckk, plane] {
      if (out->grad.empty()) return;
      if (x->requires_grad) x->ensure_grad();
      if (w->requires_grad) w->ensure_grad();
      if (bias->requires_grad) bias->ensure_grad();
      std::vector<S> col(static_cast<size_t>(ckk * plane));
      std::vector<S> dcol(static_cast<size_t>(ckk * plane));
      for (int64_t fr = 0; fr < f; ++fr) {
        const S* g = out->grad.data() + fr * cout * plane;
        if (w->requires_grad || x->requires_grad) {
          Im2Col(x->ptr() + fr * cin * h * wd, cin, h, wd, kh, kw, stride, pad,
                 ho, wo, col.data());
        }
        if (w->requires_grad) {
          kernels::matmul_nt(g, col.data(), w->grad.data(), cout, plane, ckk,
                             true);
        }
        if (bias->requires_grad) {
          for (int64_t co = 0; co < cout; ++co) {
            bias->grad[co] += kernels::sum(g + co * plane, plane);
          }
        }
        if (x->requires_grad) {
          kernels::matmul_tn(w->ptr(), g, dcol.data(), ckk, cout, plane, false);
          Col2ImAdd(dcol.data(), cin, h, wd, kh, kw, stride, pad, ho, wo,
                    x->grad.data() + fr * cin * h * wd);
        }
      }
    });
  }
  return out;
}

template <class S>
TensorPtr<S> conv1d_time(Tape<S>& tape, const TensorPtr<S>& x,
                         const TensorPtr<S>& w, const TensorPtr<S>& bias,
                         int pad) {
  VCAM_CHECK(x->rank() == 4, "conv1d_time input must be [F x C x H x W]");
  VCAM_CHECK(w->rank() == 3, "conv1d_time weight must be [Cout x Cin x Kt]");
  const int64_t f = x->dim(0), cin = x->dim(1), h = x->dim(2), wd = x->dim(3);
  const int64_t cout = w->dim(0), kt = w->dim(2);
  VCAM_CHECK(w->dim(1) == cin, "conv1d_time channel mismatch");
  VCAM_CHECK(bias->rank() == 1 && bias->dim(0) == cout,
             "conv1d_time bias mismatch");
  VCAM_CHECK(pad >= 0 && f + 2 * pad >= kt, "conv1d_time input too short");
  const int64_t fo = f + 2 * pad - kt + 1;
  const int64_t plane = h * wd;

  auto out = NewTensor<S>({fo, cout, h, wd});
  for (int64_t of = 0; of < fo; ++of) {
    S* oframe = out->ptr() + of * cout * plane;
    for (int64_t co = 0; co < cout; ++co) {
      S* orow = oframe + co * plane;
      const S b = bias->data[co];
      for (int64_t j = 0; j < plane; ++j) orow[j] = b;
      for (int64_t ci = 0; ci < cin; ++ci) {
        for (int64_t dt = 0; dt < kt; ++dt) {
          const int64_t it = of + dt - pad;
          if (it < 0 || it >= f) continue;
          kernels::axpy(w->data[(co * cin + ci) * kt + dt],
                        x->ptr() + (it * cin + ci) * plane, orow, plane);
        }
      }
    }
  }
  if (tape.check_finite) CheckFinite(*out, "conv1d_time");

  if (tape.grad_enabled &&
      (x->requires_grad || w->requires_grad || bias->requires_grad)) {
    out->requires_grad = true;
    tape.record([x, w, bias, out, f, cin, cout, kt, pad, fo, plane] {
      if (out->grad.empty()) return;
      if (x->requires_grad) x->ensure_grad();
      if (w->requires_grad) w->ensure_grad();
      if (bias->requires_grad) bias->ensure_grad();
      for (int64_t of = 0; of < fo; ++of) {
        const S* g = out->grad.data() + of * cout * plane;
        for (int64_t co = 0; co < cout; ++co) {
          const S* grow = g + co * plane;
          if (bias->requires_grad) {
            bias->grad[co] += kernels::sum(grow, plane);
          }
          for (int64_t ci = 0; ci < cin; ++ci) {
            for (int64_t dt = 0; dt < kt; ++dt) {
              const int64_t it = of + dt - pad;
              if (it < 0 || it >= f) continue;
              const S* xrow = x->ptr() + (it * cin + ci) * plane;
              if (w->requires_grad) {
                S acc = S(0);
                for (int64_t j = 0; j < plane; ++j) acc += grow[j] * xrow[j];
                w->grad[(co * cin + ci) * kt + dt] += acc;
              }
              if (x->requires_grad) {
                kernels::axpy(w->data[(co * cin + ci) * kt + dt], grow,
                              x->grad.data() + (it * cin + ci) * plane, plane);
              }
            }
          }
        }
      }
    });
  }
  return out;
}

template <class S>
TensorPtr<S> mean_spatial(Tape<S>& tape, const TensorPtr<S>& x) {
  VCAM_CHECK(x->rank() == 4, "mean_spatial input must be [F x C x H x W]");
  const int64_t f = x->dim(0), c = x->dim(1), plane = x->dim(2) * x->dim(3);
  auto out = NewTensor<S>({f, c});
  const S inv = S(1) / S(plane);
  for (int64_t fr = 0; fr < f; ++fr) {
    for (int64_t ch = 0; ch < c; ++ch) {
      out->data[fr * c + ch] =
          kernels::sum(x->ptr() + (fr * c + ch) * plane, plane) * inv;
    }
  }
  if (tape.check_finite) CheckFinite(*out, "mean_spatial");
  if (tape.grad_enabled && x->requires_grad) {
    out->requires_grad = true;
    tape.record([x, out, f, c, plane, inv] {
      if (out->grad.empty()) return;
      x->ensure_grad();
      for (int64_t fr = 0; fr < f; ++fr) {
        for (int64_t ch = 0; ch < c; ++ch) {
          const S g = out->grad[fr * c + ch] * inv;
          S* dst = x->grad.data() + (fr * c + ch) * plane;
          for (int64_t j = 0; j < plane; ++j) dst[j] += g;
        }
      }
    });
  }
  return out;
}

#define VCAM_INSTANTIATE_CONV(S)                                              \
  template TensorPtr<S> conv2d<S>(Tape<S>&, const TensorPtr<S>&,            \
                                  const TensorPtr<S>&, const TensorPtr<S>&,  \
                                  int, int);                                  \
  template TensorPtr<S> conv1d_time<S>(Tape<S>&, const TensorPtr<S>&,       \
                                       const TensorPtr<S>&,                  \
                                       const TensorPtr<S>&, int);            \
  template TensorPtr<S> mean_spatial<S>(Tape<S>&, const TensorPtr<S>&);

VCAM_INSTANTIATE_CONV(float)
VCAM_INSTANTIATE_CONV(double)

#undef VCAM_INSTANTIATE_CONV

}  // namespace vcam::numcore
