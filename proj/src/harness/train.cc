// harness/train.cc

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

#include "vcam/train.h"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <thread>

#include "vcam/kernels.h"
#include "vcam/model.h"

namespace vcam::harness {

namespace fs = std::filesystem;
using namespace vcam::numcore;

namespace {

uint64_t MixSeed(uint64_t a, uint64_t b) {
  uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Adopt the data-defining fields from the corpus the model will train on.
RunConfig AdoptCorpusMeta(const RunConfig& cfg, const std::string& data_dir) {
  RunConfig out = cfg;
  const auto meta =
      simcorpus::ReadCorpusMeta((fs::path(data_dir) / "corpus.meta").string());
  out.vocab = meta.synth.vocab;
  out.bands = meta.synth.bands;
  out.thumb_hw = meta.synth.thumb_hw;
  out.frames_per_token = meta.frames_per_token;
  return out;
}

}  // namespace

TrainStats Train(const RunConfig& cfg_in, const std::string& data_dir,
                 const std::string& ckpt_out, std::ostream* log) {
  const auto t0 = std::chrono::steady_clock::now();
  RunConfig cfg = AdoptCorpusMeta(cfg_in, data_dir);
  cfg.validate();
  const Variant variant = cfg.variant_enum();

  auto manifest =
      simcorpus::ReadManifest((fs::path(data_dir) / "train.manifest").string());
  std::vector<const simcorpus::ManifestRecord*> records;
  for (const auto& r : manifest.records) {
    if (variant == Variant::kSingleChanAV &&
        r.scenario != simcorpus::Scenario::kTwoFace) {
      continue;  // the baseline trains on its single-speaker half
    }
    records.push_back(&r);
  }
  VCAM_CHECK(!records.empty(), "no usable training records in " << data_dir);

  MultiTalkerModel<float> master(cfg);
  const int n_threads = cfg.effective_threads();
  std::vector<std::unique_ptr<MultiTalkerModel<float>>> replicas;
  for (int r = 0; r < n_threads; ++r) {
    replicas.push_back(std::make_unique<MultiTalkerModel<float>>(cfg));
  }

  // optimizer state, ordered like the (sorted) parameter map
  const bool adam = cfg.optimizer == "adam";
  std::vector<std::vector<float>> velocity;   // sgd momentum / adam first
  std::vector<std::vector<float>> second;     // adam second moment
  for (const auto& [name, p] : master.params().all()) {
    velocity.emplace_back(p->data.size(), 0.0f);
    if (adam) second.emplace_back(p->data.size(), 0.0f);
  }

  std::mt19937_64 batch_rng(MixSeed(cfg.seed, 0xba7c4));
  std::uniform_int_distribution<size_t> pick(0, records.size() - 1);

  TrainStats stats;
  for (int step = 0; step < cfg.steps; ++step) {
    std::vector<size_t> batch(static_cast<size_t>(cfg.batch_size));
    for (auto& b : batch) b = pick(batch_rng);

    // refresh replicas from the master weights
    for (auto& rep : replicas) {
      auto it = rep->params().all().begin();
      for (const auto& [name, p] : master.params().all()) {
        it->second->data = p->data;
        ++it;
      }
      rep->params().zero_grads();
    }

    std::vector<double> example_losses(batch.size(), 0.0);
    std::vector<std::string> worker_errors(static_cast<size_t>(n_threads));
    auto worker = [&](int r) {
      try {
        for (size_t i = static_cast<size_t>(r); i < batch.size();
             i += static_cast<size_t>(n_threads)) {
          const auto& rec = *records[batch[i]];
          const auto ex = simcorpus::LoadExample(manifest, rec);
          const auto feats = PrepareFeatures<float>(ex);
          std::mt19937_64 drng(
              MixSeed(cfg.seed, MixSeed(static_cast<uint64_t>(step), i)));
          Tape<float> tape;
          auto& rep = *replicas[static_cast<size_t>(r)];
          auto loss =
              rep.ExampleLoss(tape, feats, cfg.dropout > 0 ? &drng : nullptr);
          if (cfg.normalize_loss) {
            // per alignment transition, so the gradient scale does not
            // depend on the utterance length
            int64_t denom = rep.channels() * feats.frames();
            for (int m = 0; m < rep.channels(); ++m) {
              denom += static_cast<int64_t>(feats.refs[m].size());
            }
            loss = scale(tape, loss, 1.0f / static_cast<float>(denom));
          }
          example_losses[i] = static_cast<double>(loss->data[0]);
          tape.backward(loss);
        }
      } catch (const std::exception& e) {
        worker_errors[static_cast<size_t>(r)] = e.what();
      }
    };
    {
      std::vector<std::thread> pool;
      for (int r = 1; r < n_threads; ++r) pool.emplace_back(worker, r);
      worker(0);
      for (auto& th : pool) th.join();
    }
    for (const auto& err : worker_errors) {
      if (!err.empty()) throw Error("training step failed: " + err);
    }

    // merge replica gradients in replica order into the master
    master.params().zero_grads();
    for (auto& rep : replicas) {
      auto mit = master.params().all().begin();
      for (const auto& [name, p] : rep->params().all()) {
        if (!p->grad.empty()) {
          mit->second->ensure_grad();
          kernels::add(mit->second->grad.data(), p->grad.data(),
                       mit->second->grad.data(), p->numel());
        }
        ++mit;
      }
    }

    double mean_loss = 0.0;
    for (double l : example_losses) mean_loss += l;
    mean_loss /= static_cast<double>(example_losses.size());
    if (!std::isfinite(mean_loss)) {
      throw Error("training diverged: non-finite loss at step " +
                  std::to_string(step));
    }
    if (step == 0) stats.first_step_loss = mean_loss;
    stats.final_step_loss = mean_loss;

    // clipped momentum update; gradients are means over the batch
    const float inv_batch = 1.0f / static_cast<float>(batch.size());
    double sq_norm = 0.0;
    for (const auto& [name, p] : master.params().all()) {
      if (p->grad.empty()) continue;
      for (float g : p->grad) {
        const double gs = static_cast<double>(g) * inv_batch;
        sq_norm += gs * gs;
      }
    }
    const double norm = std::sqrt(sq_norm);
    const float rescale =
        norm > cfg.clip_norm
            ? static_cast<float>(cfg.clip_norm / norm) * inv_batch
            : inv_batch;
    const double warm =
        cfg.warmup_steps > 0
            ? std::min(1.0, double(step + 1) / double(cfg.warmup_steps))
            : 1.0;
    const float lr = static_cast<float>(cfg.learning_rate * warm);
    const float mu = static_cast<float>(cfg.momentum);
    if (adam) {
      const float b1 = mu, b2 = static_cast<float>(cfg.adam_beta2);
      const float eps = static_cast<float>(cfg.adam_eps);
      const double t_adam = step + 1;
      const float corr1 = 1.0f - std::pow(b1, static_cast<float>(t_adam));
      const float corr2 = 1.0f - std::pow(b2, static_cast<float>(t_adam));
      size_t pi = 0;
      for (const auto& [name, p] : master.params().all()) {
        auto& m = velocity[pi];
        auto& v = second[pi];
        ++pi;
        if (p->grad.empty()) continue;
        for (size_t i = 0; i < m.size(); ++i) {
          const float g = rescale * p->grad[i];
          m[i] = b1 * m[i] + (1.0f - b1) * g;
          v[i] = b2 * v[i] + (1.0f - b2) * g * g;
          const float mhat = m[i] / corr1;
          const float vhat = v[i] / corr2;
          p->data[i] -= lr * mhat / (std::sqrt(vhat) + eps);
        }
      }
    } else {
      size_t pi = 0;
      for (const auto& [name, p] : master.params().all()) {
        auto& v = velocity[pi++];
        if (p->grad.empty()) continue;
        for (size_t i = 0; i < v.size(); ++i) {
          v[i] = mu * v[i] + rescale * p->grad[i];
          p->data[i] -= lr * v[i];
        }
      }
    }

    if (log != nullptr &&
        (step % cfg.log_every == 0 || step + 1 == cfg.steps)) {
      *log << "step " << step << " loss " << mean_loss << std::endl;
    }
    if (step % cfg.log_every == 0 || step + 1 == cfg.steps) {
      stats.logged.emplace_back(step, mean_loss);
    }
    ++stats.steps_run;
  }

  master.Save(ckpt_out);
  stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (log != nullptr) {
    *log << "saved checkpoint to " << ckpt_out << " ("
         << stats.wall_seconds << " s)" << std::endl;
  }
  return stats;
}

}  // namespace vcam::harness
