// vcam/encoders.h

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

#ifndef VCAM_ENCODERS_H_
#define VCAM_ENCODERS_H_

#include <random>
#include <string>
#include <vector>

#include "vcam/ops.h"
#include "vcam/params.h"

// Transformer-transducer building blocks: the sequence encoders (audio,
// visual, mask), the label (prediction) encoder and the joint network.

namespace vcam::encoders {

struct TTConfig {
  int layers = 2;
  int heads = 2;
  int model_dim = 64;
  int ff_dim = 256;
  double dropout = 0.0;

  void validate() const {
    VCAM_CHECK(layers >= 0, "negative layer count");
    VCAM_CHECK(heads >= 1, "need at least one attention head");
    VCAM_CHECK(model_dim % heads == 0,
               "model_dim " << model_dim << " not divisible by " << heads
                            << " heads");
    VCAM_CHECK(dropout >= 0.0 && dropout < 1.0, "dropout must be in [0,1)");
  }
};

// Sinusoidal position rows [T x D]; parameter-free.
template <class S>
numcore::TensorPtr<S> SinusoidalPositions(int64_t t, int64_t d);

// Input projection + positions, then `layers` blocks of full (or causal)
// multi-head self-attention and a GELU feed-forward, each with residual and
// post-layer-norm. Row count is preserved.
template <class S>
class TransformerEncoder {
 public:
  TransformerEncoder(const TTConfig& cfg, int64_t input_dim, bool causal,
                     numcore::ParamStore<S>& params, const std::string& prefix,
                     std::mt19937_64& rng);

  // x [T x input_dim] -> [T x model_dim]. Dropout only acts when a rng is
  // supplied and the config rate is positive.
  numcore::TensorPtr<S> forward(numcore::Tape<S>& tape,
                                const numcore::TensorPtr<S>& x,
                                bool use_positions = true,
                                std::mt19937_64* dropout_rng = nullptr) const;

  const TTConfig& config() const { return cfg_; }

 private:
  TTConfig cfg_;
  bool causal_;
  numcore::TensorPtr<S> in_w_, in_b_;
  struct Block {
    numcore::TensorPtr<S> wq, bq, wk, bk, wv, bv, wo, bo;
    numcore::TensorPtr<S> ln1_g, ln1_b, ln2_g, ln2_b;
    numcore::TensorPtr<S> ff1_w, ff1_b, ff2_w, ff2_b;
  };
  std::vector<Block> blocks_;
};

// Prediction network: row 0 is the start state, row u encodes the prefix
// y_1..y_u. Embedding plus a causal transformer.
template <class S>
class LabelEncoder {
 public:
  LabelEncoder(int vocab, const TTConfig& cfg, numcore::ParamStore<S>& params,
               const std::string& prefix, std::mt19937_64& rng);

  // tokens each in 1..vocab -> [(U+1) x model_dim]
  numcore::TensorPtr<S> forward(numcore::Tape<S>& tape,
                                const std::vector<int>& tokens) const;

  int vocab() const { return vocab_; }

 private:
  int vocab_;
  numcore::TensorPtr<S> table_;  // [vocab+1 x model_dim]; row 0 = start state
  TransformerEncoder<S> encoder_;
};

// Projects encoder and prediction rows to a joint space, combines them

// additively, applies tanh and maps to |vocab|+1 logits (blank is id 0).
template <class S>
class JointNetwork {
 public:
  JointNetwork(int64_t enc_dim, int64_t pred_dim, int64_t joint_dim, int vocab,
               numcore::ParamStore<S>& params, const std::string& prefix,
               std::mt19937_64& rng);

  // Full lattice of log-probabilities: rows ordered t-major, i.e. row
  // t*(U+1)+u holds logP(. | t, u). Shape [(T*(U+1)) x (vocab+1)].
  numcore::TensorPtr<S> lattice_log_probs(numcore::Tape<S>& tape,
                                          const numcore::TensorPtr<S>& enc,
                                          const numcore::TensorPtr<S>& pred) const;

  // Tape-free path for decoding: pre-projected rows in, log-probs out.
  numcore::TensorPtr<S> project_enc(numcore::Tape<S>& tape,
                                    const numcore::TensorPtr<S>& enc) const;
  numcore::TensorPtr<S> project_pred(numcore::Tape<S>& tape,
                                     const numcore::TensorPtr<S>& pred) const;
  std::vector<S> log_probs_at(const numcore::Tensor<S>& enc_proj, int64_t t,
                              const numcore::Tensor<S>& pred_proj,
                              int64_t u) const;

  int vocab() const { return vocab_; }

 private:
  int vocab_;
  numcore::TensorPtr<S> enc_w_, enc_b_, pred_w_, pred_b_, out_w_, out_b_;
};

}  // namespace vcam::encoders

#endif  // VCAM_ENCODERS_H_
