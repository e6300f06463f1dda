// encoders/encoders.cc

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

#include "vcam/encoders.h"

#include <cmath>

namespace vcam::encoders {

using namespace vcam::numcore;

template <class S>
TensorPtr<S> SinusoidalPositions(int64_t t, int64_t d) {
  auto pos = NewTensor<S>({t, d});
  for (int64_t i = 0; i < t; ++i) {
    for (int64_t j = 0; j < d; j += 2) {
      const double freq =
          std::pow(10000.0, -static_cast<double>(j) / static_cast<double>(d));
      pos->at(i, j) = static_cast<S>(std::sin(static_cast<double>(i) * freq));
      if (j + 1 < d) {
        pos->at(i, j + 1) =
            static_cast<S>(std::cos(static_cast<double>(i) * freq));
      }
    }
  }
  return pos;
}

namespace {

// Large negative additive mask; exp underflows to zero after the softmax max
// subtraction while everything stays finite.
template <class S>
TensorPtr<S> CausalMask(int64_t t) {
  auto mask = NewTensor<S>({t, t});
  for (int64_t i = 0; i < t; ++i) {
    for (int64_t j = i + 1; j < t; ++j) mask->at(i, j) = S(-1e9);
  }
  return mask;
}

}  // namespace

template <class S>
TransformerEncoder<S>::TransformerEncoder(const TTConfig& cfg,
                                          int64_t input_dim, bool causal,
                                          ParamStore<S>& params,
                                          const std::string& prefix,
                                          std::mt19937_64& rng)
    : cfg_(cfg), causal_(causal) {
  cfg_.validate();
  const int64_t d = cfg_.model_dim;
  in_w_ = params.create(prefix + ".in_w", {input_dim, d}, rng);
  in_b_ = params.create_zeros(prefix + ".in_b", {d});
  for (int l = 0; l < cfg_.layers; ++l) {
    Block b;
    const std::string p = prefix + ".b" + std::to_string(l);
    b.wq = params.create(p + ".wq", {d, d}, rng);
    b.bq = params.create_zeros(p + ".bq", {d});
    b.wk = params.create(p + ".wk", {d, d}, rng);
    b.bk = params.create_zeros(p + ".bk", {d});
    b.wv = params.create(p + ".wv", {d, d}, rng);
    b.bv = params.create_zeros(p + ".bv", {d});
    b.wo = params.create(p + ".wo", {d, d}, rng);
    b.bo = params.create_zeros(p + ".bo", {d});
    b.ln1_g = params.create_const(p + ".ln1_g", {d}, S(1));
    b.ln1_b = params.create_zeros(p + ".ln1_b", {d});
    b.ln2_g = params.create_const(p + ".ln2_g", {d}, S(1));
    b.ln2_b = params.create_zeros(p + ".ln2_b", {d});
    b.ff1_w = params.create(p + ".ff1_w", {d, cfg_.ff_dim}, rng);
    b.ff1_b = params.create_zeros(p + ".ff1_b", {cfg_.ff_dim});
    b.ff2_w = params.create(p + ".ff2_w", {cfg_.ff_dim, d}, rng);
    b.ff2_b = params.create_zeros(p + ".ff2_b", {d});
    // residual branches start small so each block opens near the identity
    // and the stack is initially dominated by the (linear) input projection
    for (auto& w : {b.wo, b.ff2_w}) {
      for (auto& v : w->data) v *= S(0.1);
    }
    blocks_.push_back(b);
  }
}

template <class S>
TensorPtr<S> TransformerEncoder<S>::forward(Tape<S>& tape,
                                            const TensorPtr<S>& x,
                                            bool use_positions,
                                            std::mt19937_64* dropout_rng) const {
  VCAM_CHECK(x->rank() == 2, "encoder input must be 2-D");
  VCAM_CHECK(x->dim(1) == in_w_->dim(0),
             "encoder configured for input dim " << in_w_->dim(0) << ", got "
                                                 << x->dim(1));
  const int64_t t = x->dim(0);
  const int64_t d = cfg_.model_dim;
  const int heads = cfg_.heads;
  const int64_t dh = d / heads;
  const S inv_sqrt_dh = S(1) / static_cast<S>(std::sqrt(static_cast<double>(dh)));
  const bool do_dropout = dropout_rng != nullptr && cfg_.dropout > 0.0;

  auto h = add_bias(tape, matmul(tape, x, in_w_), in_b_);
  if (use_positions) h = add(tape, h, SinusoidalPositions<S>(t, d));

  TensorPtr<S> mask;
  if (causal_ && t > 1) mask = CausalMask<S>(t);

  for (const auto& blk : blocks_) {
    // self-attention sublayer
    auto q = add_bias(tape, matmul(tape, h, blk.wq), blk.bq);
    auto k = add_bias(tape, matmul(tape, h, blk.wk), blk.bk);
    auto v = add_bias(tape, matmul(tape, h, blk.wv), blk.bv);
    TensorPtr<S> ctx;
    for (int hd = 0; hd < heads; ++hd) {
      auto qh = slice_cols(tape, q, hd * dh, (hd + 1) * dh);
      auto kh = slice_cols(tape, k, hd * dh, (hd + 1) * dh);
      auto vh = slice_cols(tape, v, hd * dh, (hd + 1) * dh);
      auto scores = scale(tape, matmul_nt(tape, qh, kh), inv_sqrt_dh);
      if (mask) scores = add(tape, scores, mask);
      auto ctx_h = matmul(tape, softmax_rows(tape, scores), vh);
      ctx = ctx ? concat_cols(tape, ctx, ctx_h) : ctx_h;
    }
    auto attn_out = add_bias(tape, matmul(tape, ctx, blk.wo), blk.bo);
    if (do_dropout) attn_out = dropout(tape, attn_out, cfg_.dropout, *dropout_rng);
    h = layer_norm(tape, add(tape, h, attn_out), blk.ln1_g, blk.ln1_b);

    // feed-forward sublayer
    auto ff = add_bias(tape, matmul(tape, h, blk.ff1_w), blk.ff1_b);
    ff = gelu(tape, ff);
    ff = add_bias(tape, matmul(tape, ff, blk.ff2_w), blk.ff2_b);
    if (do_dropout) ff = dropout(tape, ff, cfg_.dropout, *dropout_rng);
    h = layer_norm(tape, add(tape, h, ff), blk.ln2_g, blk.ln2_b);
  }
  return h;
}

template <class S>
LabelEncoder<S>::LabelEncoder(int vocab, const TTConfig& cfg,
                              ParamStore<S>& params, const std::string& prefix,
                              std::mt19937_64& rng)
    : vocab_(vocab),
      table_(params.create(prefix + ".embed", {vocab + 1, cfg.model_dim}, rng)),
      encoder_(cfg, cfg.model_dim, /*causal=*/true, params, prefix + ".enc",
               rng) {
  VCAM_CHECK(vocab >= 1, "label encoder needs a non-empty vocabulary");
}

template <class S>
TensorPtr<S> LabelEncoder<S>::forward(Tape<S>& tape,
                                      const std::vector<int>& tokens) const {
  std::vector<int> ids(tokens.size() + 1);
  ids[0] = 0;  // start state
  for (size_t i = 0; i < tokens.size(); ++i) {
    VCAM_CHECK(tokens[i] >= 1 && tokens[i] <= vocab_,
               "token " << tokens[i] << " outside vocabulary 1.." << vocab_);
    ids[i + 1] = tokens[i];
  }
  auto emb = embedding(tape, table_, ids);
  return encoder_.forward(tape, emb, /*use_positions=*/true);
}

template <class S>
JointNetwork<S>::JointNetwork(int64_t enc_dim, int64_t pred_dim,
                              int64_t joint_dim, int vocab,
                              ParamStore<S>& params, const std::string& prefix,
                              std::mt19937_64& rng)
    : vocab_(vocab) {
  enc_w_ = params.create(prefix + ".enc_w", {enc_dim, joint_dim}, rng);
  enc_b_ = params.create_zeros(prefix + ".enc_b", {joint_dim});
  pred_w_ = params.create(prefix + ".pred_w", {pred_dim, joint_dim}, rng);
  pred_b_ = params.create_zeros(prefix + ".pred_b", {joint_dim});
  out_w_ = params.create(prefix + ".out_w", {joint_dim, vocab + 1}, rng);
  out_b_ = params.create_zeros(prefix + ".out_b", {vocab + 1});
}

template <class S>
TensorPtr<S> JointNetwork<S>::project_enc(Tape<S>& tape,
                                          const TensorPtr<S>& enc) const {
  return add_bias(tape, matmul(tape, enc, enc_w_), enc_b_);
}

template <class S>
TensorPtr<S> JointNetwork<S>::project_pred(Tape<S>& tape,
                                           const TensorPtr<S>& pred) const {
  return add_bias(tape, matmul(tape, pred, pred_w_), pred_b_);
}

template <class S>
TensorPtr<S> JointNetwork<S>::lattice_log_probs(Tape<S>& tape,
                                                const TensorPtr<S>& enc,
                                                const TensorPtr<S>& pred) const {
  auto ep = project_enc(tape, enc);
  auto pp = project_pred(tape, pred);
  auto z = tanh_op(tape, pairwise_add(tape, ep, pp));
  auto logits = add_bias(tape, matmul(tape, z, out_w_), out_b_);
  return log_softmax_rows(tape, logits);
}

template <class S>
std::vector<S> JointNetwork<S>::log_probs_at(const Tensor<S>& enc_proj,
                                             int64_t t,
                                             const Tensor<S>& pred_proj,
                                             int64_t u) const {
  const int64_t dj = enc_proj.dim(1);
  const int64_t v1 = vocab_ + 1;
  const S* e = enc_proj.ptr() + t * dj;
  const S* p = pred_proj.ptr() + u * dj;
  std::vector<S> z(static_cast<size_t>(dj));
  for (int64_t i = 0; i < dj; ++i) z[i] = std::tanh(e[i] + p[i]);
  std::vector<S> logits(static_cast<size_t>(v1));
  for (int64_t k = 0; k < v1; ++k) {
    S acc = out_b_->data[k];
    for (int64_t i = 0; i < dj; ++i) acc += z[i] * out_w_->data[i * v1 + k];
    logits[k] = acc;
  }
  S m = logits[0];
  for (S v : logits) m = v > m ? v : m;
  S s = S(0);
  for (S v : logits) s += std::exp(v - m);
  const S lse = m + std::log(s);
  for (S& v : logits) v -= lse;
  return logits;
}

template class TransformerEncoder<float>;
template class TransformerEncoder<double>;
template class LabelEncoder<float>;
template class LabelEncoder<double>;
template class JointNetwork<float>;
template class JointNetwork<double>;
template TensorPtr<float> SinusoidalPositions<float>(int64_t, int64_t);
template TensorPtr<double> SinusoidalPositions<double>(int64_t, int64_t);

}  // namespace vcam::encoders
