// kernels/dispatch.cc

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

// Runtime ISA selection. No intrinsics here; this file only decides which
// implementation runs.

#include "vcam/kernels.h"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <vector>

#include "kernels_impl.h"

namespace vcam::kernels {

namespace {

Isa DetectIsa() {
  const char* env = std::getenv("VCAMKIT_KERNELS");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return Isa::kScalar;
#ifdef VCAM_KERNELS_HAVE_AVX2
  if (__builtin_cpu_supports("avx2")) return Isa::kAvx2;
#endif
  return Isa::kScalar;
}

std::atomic<Isa> g_isa{DetectIsa()};

inline bool UseAvx2() {
#ifdef VCAM_KERNELS_HAVE_AVX2
  return g_isa.load(std::memory_order_relaxed) == Isa::kAvx2;
#else
  return false;
#endif
}

template <class S>
std::vector<S>& Scratch() {
  thread_local std::vector<S> buf;
  return buf;
}

}  // namespace

Isa active_isa() { return g_isa.load(std::memory_order_relaxed); }

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::kAvx2:
      return "avx2";
    case Isa::kScalar:
    default:
      return "scalar";
  }
}

Isa set_isa(Isa isa) {
#ifdef VCAM_KERNELS_HAVE_AVX2
  if (isa == Isa::kAvx2 && !__builtin_cpu_supports("avx2")) isa = Isa::kScalar;
#else
  isa = Isa::kScalar;
#endif
  g_isa.store(isa, std::memory_order_relaxed);
  return isa;
}

#ifdef VCAM_KERNELS_HAVE_AVX2
#define VCAM_DISPATCH(fn, ...)                          \
  do {                                                  \
    if (UseAvx2()) return avx2::fn(__VA_ARGS__);        \
    return scalar::fn(__VA_ARGS__);                     \
  } while (0)
#else
#define VCAM_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

void add(const float* a, const float* b, float* y, int64_t n) {
  VCAM_DISPATCH(add, a, b, y, n);
}
void add(const double* a, const double* b, double* y, int64_t n) {
  VCAM_DISPATCH(add, a, b, y, n);
}
void sub(const float* a, const float* b, float* y, int64_t n) {
  VCAM_DISPATCH(sub, a, b, y, n);
}
void sub(const double* a, const double* b, double* y, int64_t n) {
  VCAM_DISPATCH(sub, a, b, y, n);
}
void mul(const float* a, const float* b, float* y, int64_t n) {
  VCAM_DISPATCH(mul, a, b, y, n);
}
void mul(const double* a, const double* b, double* y, int64_t n) {
  VCAM_DISPATCH(mul, a, b, y, n);
}
void scale(const float* x, float c, float* y, int64_t n) {
  VCAM_DISPATCH(scale, x, c, y, n);
}
void scale(const double* x, double c, double* y, int64_t n) {
  VCAM_DISPATCH(scale, x, c, y, n);
}
void axpy(float c, const float* x, float* y, int64_t n) {
  VCAM_DISPATCH(axpy, c, x, y, n);
}
void axpy(double c, const double* x, double* y, int64_t n) {
  VCAM_DISPATCH(axpy, c, x, y, n);
}
void relu(const float* x, float* y, int64_t n) {
  VCAM_DISPATCH(relu, x, y, n);
}
void relu(const double* x, double* y, int64_t n) {
  VCAM_DISPATCH(relu, x, y, n);
}

void matmul_nn(const float* a, const float* b, float* c, int64_t m, int64_t k,
               int64_t n, bool accumulate) {
  VCAM_DISPATCH(matmul_nn, a, b, c, m, k, n, accumulate);
}
void matmul_nn(const double* a, const double* b, double* c, int64_t m,
               int64_t k, int64_t n, bool accumulate) {
  VCAM_DISPATCH(matmul_nn, a, b, c, m, k, n, accumulate);
}

namespace {

// NT and TN route through a transposed copy plus the NN kernel on the SIMD
// path. Per output element the product order is still ascending k, so this
// matches the direct scalar loops bitwise.
template <class S>
void MatmulNtImpl(const S* a, const S* b, S* c, int64_t m, int64_t k,
                  int64_t n, bool accumulate) {
  if (!UseAvx2()) {
    scalar::matmul_nt(a, b, c, m, k, n, accumulate);
    return;
  }
  std::vector<S>& bt = Scratch<S>();
  bt.resize(static_cast<size_t>(k) * n);
  transpose(b, bt.data(), n, k);
  matmul_nn(a, bt.data(), c, m, k, n, accumulate);
}

template <class S>
void MatmulTnImpl(const S* a, const S* b, S* c, int64_t m, int64_t k,
                  int64_t n, bool accumulate) {
  if (!UseAvx2()) {
    scalar::matmul_tn(a, b, c, m, k, n, accumulate);
    return;
  }
  std::vector<S>& at = Scratch<S>();
  at.resize(static_cast<size_t>(m) * k);
  transpose(a, at.data(), k, m);
  matmul_nn(at.data(), b, c, m, k, n, accumulate);
}

}  // namespace

void matmul_nt(const float* a, const float* b, float* c, int64_t m, int64_t k,
               int64_t n, bool accumulate) {
  MatmulNtImpl(a, b, c, m, k, n, accumulate);
}
void matmul_nt(const double* a, const double* b, double* c, int64_t m,
               int64_t k, int64_t n, bool accumulate) {
  MatmulNtImpl(a, b, c, m, k, n, accumulate);
}
void matmul_tn(const float* a, const float* b, float* c, int64_t m, int64_t k,
               int64_t n, bool accumulate) {
  MatmulTnImpl(a, b, c, m, k, n, accumulate);
}
void matmul_tn(const double* a, const double* b, double* c, int64_t m,
               int64_t k, int64_t n, bool accumulate) {
  MatmulTnImpl(a, b, c, m, k, n, accumulate);
}

namespace {

template <class S>
void TransposeImpl(const S* in, S* out, int64_t rows, int64_t cols) {
  for (int64_t r = 0; r < rows; ++r) {
    for (int64_t c = 0; c < cols; ++c) out[c * rows + r] = in[r * cols + c];
  }
}

template <class S>
S SumImpl(const S* x, int64_t n) {
  S s = 0;
  for (int64_t i = 0; i < n; ++i) s += x[i];
  return s;
}

template <class S>
bool AllFiniteImpl(const S* x, int64_t n) {
  for (int64_t i = 0; i < n; ++i) {
    if (!std::isfinite(x[i])) return false;
  }
  return true;
}

}  // namespace

void transpose(const float* in, float* out, int64_t rows, int64_t cols) {
  TransposeImpl(in, out, rows, cols);
}
void transpose(const double* in, double* out, int64_t rows, int64_t cols) {
  TransposeImpl(in, out, rows, cols);
}

float max_value(const float* x, int64_t n) { VCAM_DISPATCH(max_value, x, n); }
double max_value(const double* x, int64_t n) { VCAM_DISPATCH(max_value, x, n); }

float sum(const float* x, int64_t n) { return SumImpl(x, n); }
double sum(const double* x, int64_t n) { return SumImpl(x, n); }

bool all_finite(const float* x, int64_t n) { return AllFiniteImpl(x, n); }
bool all_finite(const double* x, int64_t n) { return AllFiniteImpl(x, n); }

#undef VCAM_DISPATCH

}  // namespace vcam::kernels
