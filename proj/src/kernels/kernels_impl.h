// kernels/kernels_impl.h
//
// Internal declarations for the per-ISA kernel implementations. Only the
// dispatcher includes this.

#ifndef VCAM_KERNELS_KERNELS_IMPL_H_
#define VCAM_KERNELS_KERNELS_IMPL_H_

#include <cstdint>

namespace vcam::kernels::scalar {

template <class S>
void add(const S* a, const S* b, S* y, int64_t n);
template <class S>
void sub(const S* a, const S* b, S* y, int64_t n);
template <class S>
void mul(const S* a, const S* b, S* y, int64_t n);
template <class S>
void scale(const S* x, S c, S* y, int64_t n);
template <class S>
void axpy(S c, const S* x, S* y, int64_t n);
template <class S>
void relu(const S* x, S* y, int64_t n);
template <class S>
void matmul_nn(const S* a, const S* b, S* c, int64_t m, int64_t k, int64_t n,
               bool accumulate);
template <class S>
void matmul_nt(const S* a, const S* b, S* c, int64_t m, int64_t k, int64_t n,
               bool accumulate);
template <class S>
void matmul_tn(const S* a, const S* b, S* c, int64_t m, int64_t k, int64_t n,
               bool accumulate);
template <class S>
S max_value(const S* x, int64_t n);

}  // namespace vcam::kernels::scalar

#if defined(__x86_64__) || defined(_M_X64)
#define VCAM_KERNELS_HAVE_AVX2 1

namespace vcam::kernels::avx2 {

void add(const float* a, const float* b, float* y, int64_t n);
void add(const double* a, const double* b, double* y, int64_t n);
void sub(const float* a, const float* b, float* y, int64_t n);
void sub(const double* a, const double* b, double* y, int64_t n);
void mul(const float* a, const float* b, float* y, int64_t n);
void mul(const double* a, const double* b, double* y, int64_t n);
void scale(const float* x, float c, float* y, int64_t n);
void scale(const double* x, double c, double* y, int64_t n);
void axpy(float c, const float* x, float* y, int64_t n);
void axpy(double c, const double* x, double* y, int64_t n);
void relu(const float* x, float* y, int64_t n);
void relu(const double* x, double* y, int64_t n);
void matmul_nn(const float* a, const float* b, float* c, int64_t m, int64_t k,
               int64_t n, bool accumulate);
void matmul_nn(const double* a, const double* b, double* c, int64_t m,
               int64_t k, int64_t n, bool accumulate);
float max_value(const float* x, int64_t n);
double max_value(const double* x, int64_t n);

}  // namespace vcam::kernels::avx2

#endif  // x86_64

#endif  // VCAM_KERNELS_KERNELS_IMPL_H_
