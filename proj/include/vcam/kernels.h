// vcam/kernels.h

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

#ifndef VCAM_KERNELS_H_
#define VCAM_KERNELS_H_

#include <cstdint>

// Arithmetic inner loops behind the tensor library. Every kernel has a scalar
// reference implementation; the data-parallel ones also have AVX2 variants
// selected at runtime. The two paths are bit-identical by construction: SIMD
// variants vectorize only across independent output elements, keep reductions
// in the same per-element order as the scalar loop, and are built without FMA
// contraction. Results therefore do not depend on which path ran, and the
// equivalence tests assert exact equality.
//
// Order-sensitive reductions (sum) and libm-backed transcendentals stay scalar
// on every path.

namespace vcam::kernels {

enum class Isa { kScalar, kAvx2 };

// Backend selected at startup from CPUID; VCAMKIT_KERNELS=scalar in the
// environment forces the reference path.
Isa active_isa();
const char* isa_name(Isa isa);

// Testing hook. Requesting an ISA the CPU lacks falls back to scalar and
// returns the ISA actually selected.
Isa set_isa(Isa isa);

// y[i] = a[i] op b[i]
void add(const float* a, const float* b, float* y, int64_t n);
void add(const double* a, const double* b, double* y, int64_t n);
void sub(const float* a, const float* b, float* y, int64_t n);
void sub(const double* a, const double* b, double* y, int64_t n);
void mul(const float* a, const float* b, float* y, int64_t n);
void mul(const double* a, const double* b, double* y, int64_t n);

// y[i] = c * x[i]
void scale(const float* x, float c, float* y, int64_t n);
void scale(const double* x, double c, double* y, int64_t n);

// y[i] += c * x[i]
void axpy(float c, const float* x, float* y, int64_t n);
void axpy(double c, const double* x, double* y, int64_t n);

// y[i] = max(x[i], 0)
void relu(const float* x, float* y, int64_t n);
void relu(const double* x, double* y, int64_t n);

// Row-major matrix products. When accumulate is false the output is
// overwritten, otherwise the product is added to it.
//   matmul_nn: c[MxN] (+)= a[MxK] * b[KxN]
//   matmul_nt: c[MxN] (+)= a[MxK] * b[NxK]^T
//   matmul_tn: c[MxN] (+)= a[KxM]^T * b[KxN]
// Per output element, products are summed in ascending-k order on every path,
// so the result matches a plain loop oracle bitwise.
void matmul_nn(const float* a, const float* b, float* c, int64_t m, int64_t k,
               int64_t n, bool accumulate);
void matmul_nn(const double* a, const double* b, double* c, int64_t m,
               int64_t k, int64_t n, bool accumulate);
void matmul_nt(const float* a, const float* b, float* c, int64_t m, int64_t k,
               int64_t n, bool accumulate);
void matmul_nt(const double* a, const double* b, double* c, int64_t m,
               int64_t k, int64_t n, bool accumulate);
void matmul_tn(const float* a, const float* b, float* c, int64_t m, int64_t k,
               int64_t n, bool accumulate);
void matmul_tn(const double* a, const double* b, double* c, int64_t m,
               int64_t k, int64_t n, bool accumulate);

// out[c][r] = in[r][c]
void transpose(const float* in, float* out, int64_t rows, int64_t cols);
void transpose(const double* in, double* out, int64_t rows, int64_t cols);

// Reductions. max_value is exact on both paths (max is associative); sum is
// sequential everywhere because reordering would change the rounding.
float max_value(const float* x, int64_t n);
double max_value(const double* x, int64_t n);
float sum(const float* x, int64_t n);
double sum(const double* x, int64_t n);

bool all_finite(const float* x, int64_t n);
bool all_finite(const double* x, int64_t n);

}  // namespace vcam::kernels

#endif  // VCAM_KERNELS_H_
