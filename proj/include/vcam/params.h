// vcam/params.h

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

#ifndef VCAM_PARAMS_H_
#define VCAM_PARAMS_H_

#include <cmath>
#include <map>
#include <random>
#include <string>

#include "vcam/tensor.h"

namespace vcam::numcore {

// Named trainable tensors. Iteration order is the sorted name order, which
// keeps optimizer updates and checkpoint files deterministic.
template <class S>
class ParamStore {
 public:
  // Glorot-style uniform init: scale = sqrt(6 / (fan_in + fan_out)) where the
  // fans come from the first/last extents (filter tensors fold the kernel
  // taps into fan_in).
  TensorPtr<S> create(const std::string& name, std::vector<int64_t> shape,
                      std::mt19937_64& rng) {
    int64_t fan_in = 1, fan_out = 1;
    if (shape.size() == 1) {
      fan_in = fan_out = shape[0];
    } else {
      fan_out = shape[0];
      for (size_t i = 1; i < shape.size(); ++i) fan_in *= shape[i];
      if (shape.size() == 2) {  // [in x out] linear layout
        fan_in = shape[0];
        fan_out = shape[1];
      }
    }
    const double s = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    auto t = insert(name, std::move(shape));
    std::uniform_real_distribution<double> d(-s, s);
    for (auto& v : t->data) v = static_cast<S>(d(rng));
    return t;
  }

  TensorPtr<S> create_zeros(const std::string& name,
                            std::vector<int64_t> shape) {
    return insert(name, std::move(shape));
  }

  TensorPtr<S> create_const(const std::string& name,
                            std::vector<int64_t> shape, S value) {
    auto t = insert(name, std::move(shape));
    std::fill(t->data.begin(), t->data.end(), value);
    return t;
  }

  TensorPtr<S> get(const std::string& name) const {
    auto it = params_.find(name);
    VCAM_CHECK(it != params_.end(), "unknown parameter " << name);
    return it->second;
  }

  const std::map<std::string, TensorPtr<S>>& all() const { return params_; }

  int64_t total_elements() const {
    int64_t n = 0;
    for (const auto& [name, t] : params_) n += t->numel();
    return n;
  }

  void zero_grads() {
    for (auto& [name, t] : params_) t->zero_grad();
  }

 private:
  TensorPtr<S> insert(const std::string& name, std::vector<int64_t> shape) {
    VCAM_CHECK(params_.find(name) == params_.end(),
               "duplicate parameter " << name);
    auto t = NewTensor<S>(std::move(shape), /*requires_grad=*/true);
    params_.emplace(name, t);
    return t;
  }

  std::map<std::string, TensorPtr<S>> params_;
};

}  // namespace vcam::numcore

#endif  // VCAM_PARAMS_H_
