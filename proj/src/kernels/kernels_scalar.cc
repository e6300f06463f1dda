// kernels/kernels_scalar.cc

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

// Reference kernels. These define the numeric behavior; the SIMD variants
// must reproduce them bit for bit.

#include <algorithm>
#include <cstring>

#include "kernels_impl.h"

namespace vcam::kernels::scalar {

template <class S>
void add(const S* a, const S* b, S* y, int64_t n) {
  for (int64_t i = 0; i < n; ++i) y[i] = a[i] + b[i];
}

template <class S>
void sub(const S* a, const S* b, S* y, int64_t n) {
  for (int64_t i = 0; i < n; ++i) y[i] = a[i] - b[i];
}

template <class S>
void mul(const S* a, const S* b, S* y, int64_t n) {
  for (int64_t i = 0; i < n; ++i) y[i] = a[i] * b[i];
}

template <class S>
void scale(const S* x, S c, S* y, int64_t n) {
  for (int64_t i = 0; i < n; ++i) y[i] = c * x[i];
}

template <class S>
void axpy(S c, const S* x, S* y, int64_t n) {
  for (int64_t i = 0; i < n; ++i) y[i] += c * x[i];
}

template <class S>
void relu(const S* x, S* y, int64_t n) {
  for (int64_t i = 0; i < n; ++i) y[i] = x[i] > S(0) ? x[i] : S(0);
}

// c[MxN] (+)= a[MxK] * b[KxN]. The k loop is outside j so that every output
// element accumulates its products in ascending-k order; the AVX2 variant
// keeps exactly this order.
template <class S>
void matmul_nn(const S* a, const S* b, S* c, int64_t m, int64_t k, int64_t n,
               bool accumulate) {
  if (!accumulate) std::memset(c, 0, sizeof(S) * m * n);
  for (int64_t i = 0; i < m; ++i) {
    S* crow = c + i * n;
    for (int64_t p = 0; p < k; ++p) {
      const S av = a[i * k + p];
      const S* brow = b + p * n;
      for (int64_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

template <class S>
void matmul_nt(const S* a, const S* b, S* c, int64_t m, int64_t k, int64_t n,
               bool accumulate) {
  for (int64_t i = 0; i < m; ++i) {
    const S* arow = a + i * k;
    for (int64_t j = 0; j < n; ++j) {
      const S* brow = b + j * k;
      S s = accumulate ? c[i * n + j] : S(0);
      for (int64_t p = 0; p < k; ++p) s += arow[p] * brow[p];
      c[i * n + j] = s;
    }
  }
}

template <class S>
void matmul_tn(const S* a, const S* b, S* c, int64_t m, int64_t k, int64_t n,
               bool accumulate) {
  if (!accumulate) std::memset(c, 0, sizeof(S) * m * n);
  for (int64_t p = 0; p < k; ++p) {
    const S* brow = b + p * n;
    for (int64_t i = 0; i < m; ++i) {
      const S av = a[p * m + i];
      S* crow = c + i * n;
      for (int64_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

template <class S>
S max_value(const S* x, int64_t n) {
  S best = x[0];
  for (int64_t i = 1; i < n; ++i) {
    if (x[i] > best) best = x[i];
  }
  return best;
}

#define VCAM_INSTANTIATE_SCALAR(S)                                            \
  template void add<S>(const S*, const S*, S*, int64_t);                      \
  template void sub<S>(const S*, const S*, S*, int64_t);                      \
  template void mul<S>(const S*, const S*, S*, int64_t);                      \
  template void scale<S>(const S*, S, S*, int64_t);                          \
  template void axpy<S>(S, const S*, S*, int64_t);                           \
  template void relu<S>(const S*, S*, int64_t);                              \
  template void matmul_nn<S>(const S*, const S*, S*, int64_t, int64_t,       \
                             int64_t, bool);                                  \
  template void matmul_nt<S>(const S*, const S*, S*, int64_t, int64_t,       \
                             int64_t, bool);                                  \
  template void matmul_tn<S>(const S*, const S*, S*, int64_t, int64_t,       \
                             int64_t, bool);                                  \
  template S max_value<S>(const S*, int64_t);

VCAM_INSTANTIATE_SCALAR(float)
VCAM_INSTANTIATE_SCALAR(double)

#undef VCAM_INSTANTIATE_SCALAR

}  // namespace vcam::kernels::scalar
