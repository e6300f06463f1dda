// tests/testutil.h
//
// Shared helpers for the test suites: seeded random fills and the central
// finite-difference gradient oracle.

#ifndef VCAM_TESTS_TESTUTIL_H_
#define VCAM_TESTS_TESTUTIL_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "vcam/ops.h"
#include "vcam/tape.h"
#include "vcam/tensor.h"

namespace vcam::testutil {

inline void FillUniform(std::mt19937_64& rng, std::vector<double>& v,
                        double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  for (auto& x : v) x = d(rng);
}

inline void FillUniform(std::mt19937_64& rng, std::vector<float>& v, float lo,
                        float hi) {
  std::uniform_real_distribution<float> d(lo, hi);
  for (auto& x : v) x = d(rng);
}

// Builds a scalar loss from the given inputs. Called many times with the same
// tensors while their data is perturbed, so it must not cache anything.
using BuildFn = std::function<numcore::TensorPtr<double>(
    numcore::Tape<double>&, const std::vector<numcore::TensorPtr<double>>&)>;

// Runs the analytic backward pass once, then checks every element of every
// input against central finite differences. Returns the worst relative error.
inline double MaxGradRelErr(const BuildFn& fn,
                            const std::vector<numcore::TensorPtr<double>>& inputs,
                            double eps = 1e-4) {
  using namespace vcam::numcore;
  for (const auto& in : inputs) {
    in->requires_grad = true;
    in->zero_grad();
  }

  Tape<double> tape;
  auto loss = fn(tape, inputs);
  tape.backward(loss);

  auto eval = [&]() {
    Tape<double> t;
    t.grad_enabled = false;
    return fn(t, inputs)->data[0];
  };

  double worst = 0.0;
  for (const auto& in : inputs) {
    in->ensure_grad();
    for (size_t i = 0; i < in->data.size(); ++i) {
      const double saved = in->data[i];
      in->data[i] = saved + eps;
      const double up = eval();
      in->data[i] = saved - eps;
      const double dn = eval();
      in->data[i] = saved;
      const double fd = (up - dn) / (2.0 * eps);
      const double g = in->grad[i];
      const double denom = std::max(std::abs(g) + std::abs(fd), 1e-3);
      worst = std::max(worst, std::abs(g - fd) / denom);
    }
  }
  return worst;
}

}  // namespace vcam::testutil

#endif  // VCAM_TESTS_TESTUTIL_H_
