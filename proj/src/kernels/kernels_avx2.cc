// kernels/kernels_avx2.cc

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

// AVX2 kernel variants. This translation unit is the only one compiled with
// -mavx2; it is built without FMA contraction so every lane performs the same
// mul-then-add sequence as the scalar reference, keeping the two paths
// bit-identical. Lanes only ever hold independent output elements.

#include "kernels_impl.h"

#ifdef VCAM_KERNELS_HAVE_AVX2

#include <immintrin.h>

#include <algorithm>
#include <cstring>

namespace vcam::kernels::avx2 {

namespace {
constexpr int64_t kF32Lanes = 8;
constexpr int64_t kF64Lanes = 4;
}  // namespace

void add(const float* a, const float* b, float* y, int64_t n) {
  int64_t i = 0;
  for (; i + kF32Lanes <= n; i += kF32Lanes) {
    _mm256_storeu_ps(y + i, _mm256_add_ps(_mm256_loadu_ps(a + i),
                                          _mm256_loadu_ps(b + i)));
  }
  for (; i < n; ++i) y[i] = a[i] + b[i];
}

void add(const double* a, const double* b, double* y, int64_t n) {
  int64_t i = 0;
  for (; i + kF64Lanes <= n; i += kF64Lanes) {
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(a + i),
                                          _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) y[i] = a[i] + b[i];
}

void sub(const float* a, const float* b, float* y, int64_t n) {
  int64_t i = 0;
  for (; i + kF32Lanes <= n; i += kF32Lanes) {
    _mm256_storeu_ps(y + i, _mm256_sub_ps(_mm256_loadu_ps(a + i),
                                          _mm256_loadu_ps(b + i)));
  }
  for (; i < n; ++i) y[i] = a[i] - b[i];
}

void sub(const double* a, const double* b, double* y, int64_t n) {
  int64_t i = 0;
  for (; i + kF64Lanes <= n; i += kF64Lanes) {
    _mm256_storeu_pd(y + i, _mm256_sub_pd(_mm256_loadu_pd(a + i),
                                          _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) y[i] = a[i] - b[i];
}

void mul(const float* a, const float* b, float* y, int64_t n) {
  int64_t i = 0;
  for (; i + kF32Lanes <= n; i += kF32Lanes) {
    _mm256_storeu_ps(y + i, _mm256_mul_ps(_mm256_loadu_ps(a + i),
                                          _mm256_loadu_ps(b + i)));
  }
  for (; i < n; ++i) y[i] = a[i] * b[i];
}

void mul(const double* a, const double* b, double* y, int64_t n) {
  int64_t i = 0;
  for (; i + kF64Lanes <= n; i += kF64Lanes) {
    _mm256_storeu_pd(y + i, _mm256_mul_pd(_mm256_loadu_pd(a + i),
                                          _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) y[i] = a[i] * b[i];
}

void scale(const float* x, float c, float* y, int64_t n) {
  const __m256 vc = _mm256_set1_ps(c);
  int64_t i = 0;
  for (; i + kF32Lanes <= n; i += kF32Lanes) {
    _mm256_storeu_ps(y + i, _mm256_mul_ps(vc, _mm256_loadu_ps(x + i)));
  }
  for (; i < n; ++i) y[i] = c * x[i];
}

void scale(const double* x, double c, double* y, int64_t n) {
  const __m256d vc = _mm256_set1_pd(c);
  int64_t i = 0;
  for (; i + kF64Lanes <= n; i += kF64Lanes) {
    _mm256_storeu_pd(y + i, _mm256_mul_pd(vc, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) y[i] = c * x[i];
}

void axpy(float c, const float* x, float* y, int64_t n) {
  const __m256 vc = _mm256_set1_ps(c);
  int64_t i = 0;
  for (; i + kF32Lanes <= n; i += kF32Lanes) {
    __m256 prod = _mm256_mul_ps(vc, _mm256_loadu_ps(x + i));
    _mm256_storeu_ps(y + i, _mm256_add_ps(_mm256_loadu_ps(y + i), prod));
  }
  for (; i < n; ++i) y[i] += c * x[i];
}

void axpy(double c, const double* x, double* y, int64_t n) {
  const __m256d vc = _mm256_set1_pd(c);
  int64_t i = 0;
  for (; i + kF64Lanes <= n; i += kF64Lanes) {
    __m256d prod = _mm256_mul_pd(vc, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] += c * x[i];
}

void relu(const float* x, float* y, int64_t n) {
  const __m256 zero = _mm256_setzero_ps();
  int64_t i = 0;
  for (; i + kF32Lanes <= n; i += kF32Lanes) {
    _mm256_storeu_ps(y + i, _mm256_max_ps(_mm256_loadu_ps(x + i), zero));
  }
  for (; i < n; ++i) y[i] = x[i] > 0.0f ? x[i] : 0.0f;
}

void relu(const double* x, double* y, int64_t n) {
  const __m256d zero = _mm256_setzero_pd();
  int64_t i = 0;
  for (; i + kF64Lanes <= n; i += kF64Lanes) {
    _mm256_storeu_pd(y + i, _mm256_max_pd(_mm256_loadu_pd(x + i), zero));
  }
  for (; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
}

// c[MxN] (+)= a[MxK] * b[KxN]. Output columns are tiled into register blocks
// held across the whole k loop; each lane sums its products in ascending-k
// order, matching the scalar reference exactly.
void matmul_nn(const float* a, const float* b, float* c, int64_t m, int64_t k,
               int64_t n, bool accumulate) {
  if (!accumulate) std::memset(c, 0, sizeof(float) * m * n);
  constexpr int64_t kTile = 4 * kF32Lanes;  // 32 output columns per block
  for (int64_t i = 0; i < m; ++i) {
    const float* arow = a + i * k;
    float* crow = c + i * n;
    int64_t j = 0;
    for (; j + kTile <= n; j += kTile) {
      float* cj = crow + j;
      __m256 acc0 = _mm256_loadu_ps(cj);
      __m256 acc1 = _mm256_loadu_ps(cj + 8);
      __m256 acc2 = _mm256_loadu_ps(cj + 16);
      __m256 acc3 = _mm256_loadu_ps(cj + 24);
      for (int64_t p = 0; p < k; ++p) {
        const __m256 av = _mm256_set1_ps(arow[p]);
        const float* bj = b + p * n + j;
        acc0 = _mm256_add_ps(acc0, _mm256_mul_ps(av, _mm256_loadu_ps(bj)));
        acc1 = _mm256_add_ps(acc1, _mm256_mul_ps(av, _mm256_loadu_ps(bj + 8)));
        acc2 = _mm256_add_ps(acc2, _mm256_mul_ps(av, _mm256_loadu_ps(bj + 16)));
        acc3 = _mm256_add_ps(acc3, _mm256_mul_ps(av, _mm256_loadu_ps(bj + 24)));
      }
      _mm256_storeu_ps(cj, acc0);
      _mm256_storeu_ps(cj + 8, acc1);
      _mm256_storeu_ps(cj + 16, acc2);
      _mm256_storeu_ps(cj + 24, acc3);
    }
    for (; j + kF32Lanes <= n; j += kF32Lanes) {
      __m256 acc = _mm256_loadu_ps(crow + j);
      for (int64_t p = 0; p < k; ++p) {
        const __m256 av = _mm256_set1_ps(arow[p]);
        acc = _mm256_add_ps(acc, _mm256_mul_ps(av, _mm256_loadu_ps(b + p * n + j)));
      }
      _mm256_storeu_ps(crow + j, acc);
    }
    for (; j < n; ++j) {
      float s = crow[j];
      for (int64_t p = 0; p < k; ++p) s += arow[p] * b[p * n + j];
      crow[j] = s;
    }
  }
}

void matmul_nn(const double* a, const double* b, double* c, int64_t m,
               int64_t k, int64_t n, bool accumulate) {
  if (!accumulate) std::memset(c, 0, sizeof(double) * m * n);
  constexpr int64_t kTile = 4 * kF64Lanes;  // 16 output columns per block
  for (int64_t i = 0; i < m; ++i) {
    const double* arow = a + i * k;
    double* crow = c + i * n;
    int64_t j = 0;
    for (; j + kTile <= n; j += kTile) {
      double* cj = crow + j;
      __m256d acc0 = _mm256_loadu_pd(cj);
      __m256d acc1 = _mm256_loadu_pd(cj + 4);
      __m256d acc2 = _mm256_loadu_pd(cj + 8);
      __m256d acc3 = _mm256_loadu_pd(cj + 12);
      for (int64_t p = 0; p < k; ++p) {
        const __m256d av = _mm256_set1_pd(arow[p]);
        const double* bj = b + p * n + j;
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(av, _mm256_loadu_pd(bj)));
        acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(av, _mm256_loadu_pd(bj + 4)));
        acc2 = _mm256_add_pd(acc2, _mm256_mul_pd(av, _mm256_loadu_pd(bj + 8)));
        acc3 = _mm256_add_pd(acc3, _mm256_mul_pd(av, _mm256_loadu_pd(bj + 12)));
      }
      _mm256_storeu_pd(cj, acc0);
      _mm256_storeu_pd(cj + 4, acc1);
      _mm256_storeu_pd(cj + 8, acc2);
      _mm256_storeu_pd(cj + 12, acc3);
    }
    for (; j + kF64Lanes <= n; j += kF64Lanes) {
      __m256d acc = _mm256_loadu_pd(crow + j);
      for (int64_t p = 0; p < k; ++p) {
        const __m256d av = _mm256_set1_pd(arow[p]);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(av, _mm256_loadu_pd(b + p * n + j)));
      }
      _mm256_storeu_pd(crow + j, acc);
    }
    for (; j < n; ++j) {
      double s = crow[j];
      for (int64_t p = 0; p < k; ++p) s += arow[p] * b[p * n + j];
      crow[j] = s;
    }
  }
}

float max_value(const float* x, int64_t n) {
  if (n < 2 * kF32Lanes) {
    float best = x[0];
    for (int64_t i = 1; i < n; ++i) best = x[i] > best ? x[i] : best;
    return best;
  }
  __m256 vbest = _mm256_loadu_ps(x);
  int64_t i = kF32Lanes;
  for (; i + kF32Lanes <= n; i += kF32Lanes) {
    vbest = _mm256_max_ps(vbest, _mm256_loadu_ps(x + i));
  }
  alignas(32) float lanes[kF32Lanes];
  _mm256_store_ps(lanes, vbest);
  float best = lanes[0];
  for (int l = 1; l < kF32Lanes; ++l) best = lanes[l] > best ? lanes[l] : best;
  for (; i < n; ++i) best = x[i] > best ? x[i] : best;
  return best;
}

double max_value(const double* x, int64_t n) {
  if (n < 2 * kF64Lanes) {
    double best = x[0];
    for (int64_t i = 1; i < n; ++i) best = x[i] > best ? x[i] : best;
    return best;
  }
  __m256d vbest = _mm256_loadu_pd(x);
  int64_t i = kF64Lanes;
  for (; i + kF64Lanes <= n; i += kF64Lanes) {
    vbest = _mm256_max_pd(vbest, _mm256_loadu_pd(x + i));
  }
  alignas(32) double lanes[kF64Lanes];
  _mm256_store_pd(lanes, vbest);
  double best = lanes[0];
  for (int l = 1; l < kF64Lanes; ++l) best = lanes[l] > best ? lanes[l] : best;
  for (; i < n; ++i) best = x[i] > best ? x[i] : best;
  return best;
}

}  // namespace vcam::kernels::avx2

#endif  // VCAM_KERNELS_HAVE_AVX2
