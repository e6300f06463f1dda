// vcam/tensor.h

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

#ifndef VCAM_TENSOR_H_
#define VCAM_TENSOR_H_

#include <cstdint>
#include <memory>
#include <numeric>
#include <vector>

#include "vcam/common.h"

namespace vcam::numcore {

// Dense row-major tensor. Scalar type is float for training and double for
// the gradient-check paths. Data is immutable after the op that created it;
// only grad accumulates afterwards.
template <class S>
struct Tensor {
  std::vector<int64_t> shape;
  std::vector<S> data;
  bool requires_grad = false;
  std::vector<S> grad;  // empty until first touched; then same length as data

  Tensor() = default;
  explicit Tensor(std::vector<int64_t> s, bool rg = false)
      : shape(std::move(s)), requires_grad(rg) {
    int64_t n = 1;
    for (int64_t e : shape) {
      VCAM_CHECK(e > 0, "tensor extents must be positive, got " << e);
      n *= e;
    }
    data.assign(static_cast<size_t>(n), S(0));
  }

  int64_t numel() const { return static_cast<int64_t>(data.size()); }
  int rank() const { return static_cast<int>(shape.size()); }
  int64_t dim(int i) const { return shape[static_cast<size_t>(i)]; }

  S* ptr() { return data.data(); }
  const S* ptr() const { return data.data(); }

  // 2-D accessors, used mostly by tests and small glue code.
  S& at(int64_t r, int64_t c) { return data[static_cast<size_t>(r * dim(1) + c)]; }
  S at(int64_t r, int64_t c) const {
    return data[static_cast<size_t>(r * dim(1) + c)];
  }

  void ensure_grad() {
    if (grad.empty()) grad.assign(data.size(), S(0));
  }
  void zero_grad() {
    if (!grad.empty()) std::fill(grad.begin(), grad.end(), S(0));
  }
};

template <class S>
using TensorPtr = std::shared_ptr<Tensor<S>>;

template <class S>
TensorPtr<S> NewTensor(std::vector<int64_t> shape, bool requires_grad = false) {
  return std::make_shared<Tensor<S>>(std::move(shape), requires_grad);
}

template <class S>
TensorPtr<S> NewTensor(std::vector<int64_t> shape, std::vector<S> values,
                       bool requires_grad = false) {
  auto t = NewTensor<S>(std::move(shape), requires_grad);
  VCAM_CHECK(static_cast<int64_t>(values.size()) == t->numel(),
             "value count " << values.size() << " does not match shape");
  t->data = std::move(values);
  return t;
}

}  // namespace vcam::numcore

#endif  // VCAM_TENSOR_H_
