// harness/evaluate.cc

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

#include "vcam/evaluate.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include <json.hpp>

namespace vcam::harness {

namespace fs = std::filesystem;

namespace {

struct ExampleResult {
  std::vector<EditCounts> channel_counts;
  std::vector<asd::FrameScores> track_scores;  // vcam, Overlap set only
  std::vector<bool> in_gt_out;                 // per track
};

ExampleResult EvalOne(const MultiTalkerModel<float>& model,
                      const simcorpus::Manifest& manifest,
                      const simcorpus::ManifestRecord& rec, bool want_asd) {
  const auto ex = simcorpus::LoadExample(manifest, rec);
  const auto feats = PrepareFeatures<float>(ex);
  const auto decoded = model.Decode(feats, want_asd);

  ExampleResult res;
  for (size_t m = 0; m < decoded.hyps.size(); ++m) {
    VCAM_CHECK(m < feats.refs.size(), "missing reference channel " << m);
    res.channel_counts.push_back(
        EditDistance(feats.refs[m], decoded.hyps[m].tokens));
  }
  if (want_asd && !decoded.maps.empty()) {
    for (size_t m = 0; m < decoded.maps.size(); ++m) {
      auto fs = asd::score_frames(decoded.maps[m].weights,
                                  feats.speech_intervals[m],
                                  feats.overlap_interval);
      double in_sum = 0, out_sum = 0;
      int64_t in_n = 0, out_n = 0;
      for (size_t j = 0; j < fs.scores.size(); ++j) {
        if (fs.active[j]) {
          in_sum += fs.scores[j];
          ++in_n;
        } else {
          out_sum += fs.scores[j];
          ++out_n;
        }
      }
      const double in_mean = in_n > 0 ? in_sum / in_n : 0.0;
      const double out_mean = out_n > 0 ? out_sum / out_n : 0.0;
      res.in_gt_out.push_back(out_n == 0 || in_mean > out_mean);
      res.track_scores.push_back(std::move(fs));
    }
  }
  return res;
}

}  // namespace

EvalReport Evaluate(const MultiTalkerModel<float>& model,
                    const std::string& data_dir, int threads) {
  const auto t0 = std::chrono::steady_clock::now();
  EvalReport report;
  report.variant = VariantName(model.config().variant_enum());
  const bool vcam = model.config().variant_enum() == Variant::kMTVCAM;
  const int n_threads = threads > 0 ? threads : 1;

  const std::pair<const char*, const char*> sets[] = {
      {"test_overlap.manifest", "Overlap"},
      {"test_twoface.manifest", "Single-TwoFace"},
      {"test_oneface.manifest", "Single-OneFace"},
  };

  std::vector<asd::FrameScores> all_tracks;
  std::vector<double> per_track_ap;
  int64_t tracks_in_gt_out = 0, tracks_total = 0;

  for (const auto& [file, name] : sets) {
    const auto path = fs::path(data_dir) / file;
    VCAM_CHECK(fs::exists(path), "missing manifest " << path.string());
    const auto manifest = simcorpus::ReadManifest(path.string());
    const bool want_asd = vcam && std::string(name) == "Overlap";

    std::vector<ExampleResult> results(manifest.records.size());
    std::vector<std::string> errors(static_cast<size_t>(n_threads));
    auto worker = [&](int r) {
      try {
        for (size_t i = static_cast<size_t>(r); i < manifest.records.size();
             i += static_cast<size_t>(n_threads)) {
          results[i] = EvalOne(model, manifest, manifest.records[i], want_asd);
        }
      } catch (const std::exception& e) {
        errors[static_cast<size_t>(r)] = e.what();
      }
    };
    {
      std::vector<std::thread> pool;
      for (int r = 1; r < n_threads; ++r) pool.emplace_back(worker, r);
      worker(0);
      for (auto& th : pool) th.join();
    }
    for (const auto& err : errors) {
      if (!err.empty()) throw Error(std::string("evaluation failed: ") + err);
    }

    SetReport sr;
    sr.name = name;
    sr.num_examples = static_cast<int64_t>(manifest.records.size());
    for (const auto& res : results) {
      for (size_t m = 0; m < res.channel_counts.size(); ++m) {
        if (sr.per_channel.size() <= m) sr.per_channel.emplace_back();
        sr.per_channel[m] += res.channel_counts[m];
        sr.total += res.channel_counts[m];
      }
      for (size_t m = 0; m < res.track_scores.size(); ++m) {
        per_track_ap.push_back(asd::average_precision(res.track_scores[m]));
        all_tracks.push_back(res.track_scores[m]);
        tracks_in_gt_out += res.in_gt_out[m] ? 1 : 0;
        ++tracks_total;
      }
    }
    report.sets.push_back(std::move(sr));
  }

  if (!per_track_ap.empty()) {
    report.has_asd = true;
    report.map = asd::map_over_tracks(per_track_ap);
    report.overlap_frame_fraction = asd::overlapped_fraction(all_tracks);
    report.frac_tracks_in_gt_out =
        static_cast<double>(tracks_in_gt_out) / double(tracks_total);
    report.pr = asd::pr_curve(all_tracks);
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return report;
}

void WriteReport(const EvalReport& report, const std::string& tsv_path) {
  {
    std::ofstream f(tsv_path, std::ios::trunc);
    VCAM_CHECK(f.good(), "cannot open " << tsv_path);
    f << "set\texamples\tref_tokens\tsub\tdel\tins\twer\twer_ch0\twer_ch1\t"
         "map\toverlap_frame_fraction\n";
    char buf[64];
    auto wer_str = [&](const EditCounts& c) -> std::string {
      if (c.ref_len == 0) return "-";
      std::snprintf(buf, sizeof(buf), "%.4f",
                    double(c.errors()) / double(c.ref_len));
      return buf;
    };
    for (const auto& s : report.sets) {
      std::snprintf(buf, sizeof(buf), "%.4f", s.wer());
      f << s.name << '\t' << s.num_examples << '\t' << s.total.ref_len << '\t'
        << s.total.substitutions << '\t' << s.total.deletions << '\t'
        << s.total.insertions << '\t' << buf << '\t'
        << (s.per_channel.size() > 0 ? wer_str(s.per_channel[0]) : "-") << '\t'
        << (s.per_channel.size() > 1 ? wer_str(s.per_channel[1]) : "-") << '\t';
      if (report.has_asd && s.name == "Overlap") {
        std::snprintf(buf, sizeof(buf), "%.4f", report.map);
        f << buf << '\t';
        std::snprintf(buf, sizeof(buf), "%.4f", report.overlap_frame_fraction);
        f << buf << '\n';
      } else {
        f << "-\t-\n";
      }
    }
    VCAM_CHECK(f.good(), "write failed for " << tsv_path);
  }
  {
    // line-delimited structured log
    std::ofstream f(tsv_path + ".jsonl", std::ios::trunc);
    VCAM_CHECK(f.good(), "cannot open " << tsv_path << ".jsonl");
    for (const auto& s : report.sets) {
      nlohmann::json j;
      j["record"] = "set";
      j["variant"] = report.variant;
      j["set"] = s.name;
      j["examples"] = s.num_examples;
      j["ref_tokens"] = s.total.ref_len;
      j["sub"] = s.total.substitutions;
      j["del"] = s.total.deletions;
      j["ins"] = s.total.insertions;
      j["wer"] = s.wer();
      for (size_t m = 0; m < s.per_channel.size(); ++m) {
        const auto& c = s.per_channel[m];
        nlohmann::json cj;
        cj["ref_tokens"] = c.ref_len;
        cj["errors"] = c.errors();
        j["channels"].push_back(cj);
      }
      f << j.dump() << '\n';
    }
    nlohmann::json j;
    j["record"] = "summary";
    j["variant"] = report.variant;
    j["wall_seconds"] = report.wall_seconds;
    if (report.has_asd) {
      j["map"] = report.map;
      j["overlap_frame_fraction"] = report.overlap_frame_fraction;
      j["frac_tracks_in_gt_out"] = report.frac_tracks_in_gt_out;
    }
    f << j.dump() << '\n';
    VCAM_CHECK(f.good(), "write failed for " << tsv_path << ".jsonl");
  }
  if (report.has_asd && !report.pr.empty()) {
    const auto pr_path =
        fs::path(tsv_path).replace_extension().string() + "_pr.tsv";
    asd::WritePrCurve(pr_path, report.pr);
  }
}

}  // namespace vcam::harness
