// tools/main.cc

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

// Command-line entry points: corpus generation, training, evaluation and
// attention-map export.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "vcam/attention.h"
#include "vcam/evaluate.h"
#include "vcam/kernels.h"
#include "vcam/tensor_io.h"
#include "vcam/train.h"

namespace fs = std::filesystem;
using namespace vcam;

namespace {

harness::RunConfig LoadConfigOrDefault(const std::string& path) {
  if (path.empty()) return harness::RunConfig();
  return harness::RunConfig::FromFile(path);
}

simcorpus::CorpusConfig ToCorpusConfig(const harness::RunConfig& rc) {
  simcorpus::CorpusConfig cc;
  cc.n_train = rc.n_train;
  cc.n_test = rc.n_test;
  cc.seed = rc.seed;
  cc.utt_min_s = rc.utt_min_s;
  cc.utt_max_s = rc.utt_max_s;
  cc.frames_per_token = rc.frames_per_token;
  cc.noise_level = rc.noise_level;
  cc.train_speakers = rc.train_speakers;
  cc.test_speakers = rc.test_speakers;
  cc.synth.vocab = rc.vocab;
  cc.synth.bands = rc.bands;
  cc.synth.thumb_hw = rc.thumb_hw;
  cc.synth.corpus_seed = rc.seed;
  return cc;
}

int RunGenCorpus(const std::string& config, const std::string& out,
                 uint64_t seed, bool seed_set) {
  auto rc = LoadConfigOrDefault(config);
  if (seed_set) rc.seed = seed;
  auto cc = ToCorpusConfig(rc);
  simcorpus::build_corpus(cc, out);
  std::cout << "corpus written to " << out << " (train " << cc.n_train
            << ", test 3x" << cc.n_test << ", seed " << cc.seed << ")\n";
  return 0;
}

int RunTrain(const std::string& config, const std::string& data,
             const std::string& out) {
  auto rc = LoadConfigOrDefault(config);
  std::cout << "training variant " << rc.variant << " on " << data
            << " [kernels: " << kernels::isa_name(kernels::active_isa())
            << ", threads: " << rc.effective_threads() << "]\n";
  auto stats = harness::Train(rc, data, out, &std::cout);
  std::cout << "steps " << stats.steps_run << ", first loss "
            << stats.first_step_loss << ", final loss "
            << stats.final_step_loss << "\n";
  return 0;
}

int RunEval(const std::string& ckpt, const std::string& data,
            const std::string& report_path, int threads) {
  auto model = harness::MultiTalkerModel<float>::Load(ckpt);
  auto report = harness::Evaluate(*model, data, threads);
  harness::WriteReport(report, report_path);
  std::cout << "variant " << report.variant << "\n";
  for (const auto& s : report.sets) {
    std::cout << s.name << ": WER " << s.wer() << " (" << s.total.errors()
              << "/" << s.total.ref_len << " over " << s.num_examples
              << " examples)\n";
  }
  if (report.has_asd) {
    std::cout << "ASD mAP " << report.map << " (overlapped frame fraction "
              << report.overlap_frame_fraction << ")\n";
  }
  std::cout << "report written to " << report_path << " (+ .jsonl)\n";
  return 0;
}

int RunExportAttn(const std::string& ckpt, const std::string& data,
                  const std::string& example_id, const std::string& out) {
  auto model = harness::MultiTalkerModel<float>::Load(ckpt);
  if (model->config().variant_enum() != harness::Variant::kMTVCAM) {
    throw Error("attention export requires an mt_vcam checkpoint, got " +
                model->config().variant);
  }
  // the example may live in any of the four manifests
  const char* manifests[] = {"test_overlap.manifest", "test_twoface.manifest",
                             "test_oneface.manifest", "train.manifest"};
  for (const char* mf : manifests) {
    const auto mpath = fs::path(data) / mf;
    if (!fs::exists(mpath)) continue;
    const auto manifest = simcorpus::ReadManifest(mpath.string());
    for (const auto& rec : manifest.records) {
      if (rec.id != example_id) continue;
      const auto ex = simcorpus::LoadExample(manifest, rec);
      const auto feats = harness::PrepareFeatures<float>(ex);
      const auto decoded = model->Decode(feats, /*want_maps=*/true);
      fs::create_directories(out);
      for (size_t m = 0; m < decoded.maps.size(); ++m) {
        const auto stem =
            (fs::path(out) / (example_id + ".track" + std::to_string(m)))
                .string();
        numcore::SaveTensor(stem + ".attn.vct", decoded.maps[m].weights);
        attention::WritePgm(stem + ".attn.pgm", decoded.maps[m].weights);
      }
      std::ofstream ann(fs::path(out) / (example_id + ".overlap.txt"),
                        std::ios::trunc);
      if (rec.has_overlap) {
        ann << "overlap_frames=" << rec.overlap_interval[0] << ":"
            << rec.overlap_interval[1] << "\n"
            << "overlap_rows=" << rec.overlap_interval[0] / 3 << ":"
            << rec.overlap_interval[1] / 3 << "\n";
      } else {
        ann << "overlap_frames=-\n";
      }
      std::cout << decoded.maps.size() << " attention maps written to " << out
                << "\n";
      return 0;
    }
  }
  throw Error("example id not found in any manifest under " + data);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"audio-visual multi-talker transducer toolkit"};
  app.require_subcommand(1);

  std::string config, out, data, ckpt, report_path, example_id;
  uint64_t seed = 0;
  int threads = 2;

  auto* gen = app.add_subcommand("gen-corpus",
                                 "generate the simulated overlap corpus");
  gen->add_option("--config", config, "key=value configuration file");
  gen->add_option("--out", out, "output corpus directory")->required();
  auto* seed_opt = gen->add_option("--seed", seed, "overrides the config seed");

  auto* train = app.add_subcommand("train", "train a model variant");
  train->add_option("--config", config, "key=value configuration file");
  train->add_option("--data", data, "corpus directory")->required();
  train->add_option("--out", ckpt, "checkpoint output directory")->required();

  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint");
  eval->add_option("--ckpt", ckpt, "checkpoint directory")->required();
  eval->add_option("--data", data, "corpus directory")->required();
  eval->add_option("--report", report_path, "report file (TSV)")->required();
  eval->add_option("--threads", threads, "decode worker count");

  auto* exp = app.add_subcommand("export-attn", "export attention maps");
  exp->add_option("--ckpt", ckpt, "checkpoint directory")->required();
  exp->add_option("--data", data, "corpus directory")->required();
  exp->add_option("--example", example_id, "example id")->required();
  exp->add_option("--out", out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      return RunGenCorpus(config, out, seed, seed_opt->count() > 0);
    }
    if (train->parsed()) return RunTrain(config, data, ckpt);
    if (eval->parsed()) return RunEval(ckpt, data, report_path, threads);
    if (exp->parsed()) return RunExportAttn(ckpt, data, example_id, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
