// simcorpus/simcorpus.cc

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

#include "vcam/simcorpus.h"

#include <algorithm>
#include <cinttypes>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vcam/tensor_io.h"

namespace vcam::simcorpus {

namespace fs = std::filesystem;
using numcore::Tensor;

const char* ScenarioName(Scenario s) {
  switch (s) {
    case Scenario::kOverlap:
      return "Overlap";
    case Scenario::kTwoFace:
      return "TwoFace";
    case Scenario::kOneFace:
      return "OneFace";
  }
  return "?";
}

Scenario ParseScenario(const std::string& name) {
  if (name == "Overlap") return Scenario::kOverlap;
  if (name == "TwoFace") return Scenario::kTwoFace;
  if (name == "OneFace") return Scenario::kOneFace;
  throw Error("unknown scenario tag: " + name);
}

double sample_overlap_seconds(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(1.0, 5.0);
  return d(rng);
}

std::vector<int64_t> pingpong_indices(int64_t n, int64_t gap, bool before) {
  VCAM_CHECK(n >= 1, "pingpong needs at least one source frame");
  VCAM_CHECK(gap >= 0, "negative gap");
  std::vector<int64_t> out(static_cast<size_t>(gap));
  if (n == 1) {
    std::fill(out.begin(), out.end(), 0);
    return out;
  }
  const int64_t period = 2 * (n - 1);
  auto reflect = [&](int64_t p) {
    int64_t q = ((p % period) + period) % period;
    return q < n ? q : period - q;
  };
  for (int64_t i = 0; i < gap; ++i) {
    const int64_t pos = before ? -gap + i : n + i;
    out[static_cast<size_t>(i)] = reflect(pos);
  }
  return out;
}

namespace {

int64_t ThumbElems(const Tensor<float>& video) {
  return video.dim(1) * video.dim(2) * video.dim(3);
}

// Copies source frames into track[dst0..dst0+idx.size()) and tags provenance.
void FillFrames(const Tensor<float>& src_video, const std::vector<int64_t>& idx,
                int64_t dst0, int64_t speaker, Tensor<float>* track,
                std::vector<int64_t>* provenance) {
  const int64_t elems = ThumbElems(src_video);
  for (size_t i = 0; i < idx.size(); ++i) {
    std::memcpy(track->ptr() + (dst0 + static_cast<int64_t>(i)) * elems,
                src_video.ptr() + idx[i] * elems,
                sizeof(float) * static_cast<size_t>(elems));
    (*provenance)[static_cast<size_t>(dst0 + static_cast<int64_t>(i))] = speaker;
  }
}

std::vector<int64_t> Iota(int64_t n) {
  std::vector<int64_t> v(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) v[static_cast<size_t>(i)] = i;
  return v;
}

}  // namespace

OverlappedExample make_overlap(const synthgen::AVUtterance& u1,
                               const synthgen::AVUtterance& u2,
                               double overlap_s) {
  VCAM_CHECK(overlap_s > 0.0, "overlap must be positive");
  VCAM_CHECK(u1.audio_raw.dim(1) == u2.audio_raw.dim(1),
             "band counts differ");
  VCAM_CHECK(u1.video.shape[1] == u2.video.shape[1] &&
                 u1.video.shape[2] == u2.video.shape[2],
             "thumbnail sizes differ");
  const int64_t len1 = u1.frames(), len2 = u2.frames();
  const int64_t ov = SecondsToFrames(overlap_s);
  VCAM_CHECK(ov >= 1 && ov < len1 && ov < len2,
             "overlap of " << ov << " frames rejected for utterances of "
                           << len1 << " and " << len2 << " frames");
  const int64_t offset = len1 - ov;
  const int64_t total = offset + len2;
  const int64_t bands = u1.audio_raw.dim(1);
  const int64_t hw = u1.video.dim(1);

  OverlappedExample ex;
  ex.scenario = Scenario::kOverlap;
  ex.audio_raw = Tensor<float>({total, bands});
  // energy-domain additive mix; zero outside each speech span
  for (int64_t t = 0; t < len1; ++t) {
    for (int64_t b = 0; b < bands; ++b) {
      ex.audio_raw.at(t, b) += u1.audio_raw.at(t, b);
    }
  }
  for (int64_t t = 0; t < len2; ++t) {
    for (int64_t b = 0; b < bands; ++b) {
      ex.audio_raw.at(offset + t, b) += u2.audio_raw.at(t, b);
    }
  }

  ex.tracks.assign(2, Tensor<float>({total, hw, hw, 3}));
  ex.track_speakers.assign(2, std::vector<int64_t>(static_cast<size_t>(total)));
  // track 0: the earlier speaker's real frames, then reflected fill
  FillFrames(u1.video, Iota(len1), 0, u1.speaker_id, &ex.tracks[0],
             &ex.track_speakers[0]);
  FillFrames(u1.video, pingpong_indices(len1, total - len1, /*before=*/false),
             len1, u1.speaker_id, &ex.tracks[0], &ex.track_speakers[0]);
  // track 1: reflected fill, then the later speaker's real frames
  FillFrames(u2.video, pingpong_indices(len2, offset, /*before=*/true), 0,
             u2.speaker_id, &ex.tracks[1], &ex.track_speakers[1]);
  FillFrames(u2.video, Iota(len2), offset, u2.speaker_id, &ex.tracks[1],
             &ex.track_speakers[1]);

  ex.refs = {u1.labels, u2.labels};
  ex.speech_intervals = {{0, len1}, {offset, total}};
  ex.overlap_interval = {offset, len1};
  return ex;
}

OverlappedExample make_twoface(const synthgen::AVUtterance& u,
                               const synthgen::AVUtterance& distractor) {
  VCAM_CHECK(u.speaker_id != distractor.speaker_id,
             "TwoFace distractor must come from a different speaker");
  VCAM_CHECK(u.video.shape[1] == distractor.video.shape[1] &&
                 u.video.shape[2] == distractor.video.shape[2],
             "thumbnail sizes differ");
  const int64_t len = u.frames();
  const int64_t dlen = distractor.frames();
  const int64_t hw = u.video.dim(1);

  OverlappedExample ex;
  ex.scenario = Scenario::kTwoFace;
  ex.audio_raw = u.audio_raw;  // audio of the target speaker alone
  ex.tracks.assign(2, Tensor<float>({len, hw, hw, 3}));
  ex.track_speakers.assign(2, std::vector<int64_t>(static_cast<size_t>(len)));
  FillFrames(u.video, Iota(len), 0, u.speaker_id, &ex.tracks[0],
             &ex.track_speakers[0]);
  // fit the distractor to the target span: truncate if longer, reflect if
  // shorter (positions 0..len-1 of the reflected sequence cover both)
  std::vector<int64_t> idx(static_cast<size_t>(len));
  if (dlen >= len) {
    idx = Iota(len);
  } else {
    idx = Iota(dlen);
    auto ext = pingpong_indices(dlen, len - dlen, /*before=*/false);
    idx.insert(idx.end(), ext.begin(), ext.end());
  }
  FillFrames(distractor.video, idx, 0, distractor.speaker_id, &ex.tracks[1],
             &ex.track_speakers[1]);

  ex.refs = {u.labels, {}};
  ex.speech_intervals = {{0, len}, {0, 0}};
  ex.overlap_interval = {0, 0};
  return ex;
}

OverlappedExample make_oneface(const synthgen::AVUtterance& u) {
  const int64_t len = u.frames();
  const int64_t hw = u.video.dim(1);
  OverlappedExample ex;
  ex.scenario = Scenario::kOneFace;
  ex.audio_raw = u.audio_raw;
  ex.tracks.assign(2, Tensor<float>({len, hw, hw, 3}));
  ex.track_speakers.assign(2, std::vector<int64_t>(static_cast<size_t>(len)));
  FillFrames(u.video, Iota(len), 0, u.speaker_id, &ex.tracks[0],
             &ex.track_speakers[0]);
  // track 1 stays all-zero thumbnails
  std::fill(ex.track_speakers[1].begin(), ex.track_speakers[1].end(), -1);
  ex.refs = {u.labels, {}};
  ex.speech_intervals = {{0, len}, {0, 0}};
  ex.overlap_interval = {0, 0};
  return ex;
}

namespace {

std::string JoinTokens(const std::vector<int>& tokens) {
  std::string s;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(tokens[i]);
  }
  return s;
}

std::vector<int> SplitTokens(const std::string& s) {
  std::vector<int> out;
  std::istringstream is(s);
  int v;
  while (is >> v) out.push_back(v);
  return out;
}

std::vector<std::string> SplitOn(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::string IntervalString(const std::array<int64_t, 2>& iv) {
  return std::to_string(iv[0]) + ":" + std::to_string(iv[1]);
}

std::array<int64_t, 2> ParseInterval(const std::string& s) {
  const auto parts = SplitOn(s, ':');
  VCAM_CHECK(parts.size() == 2, "bad interval field: " << s);
  return {std::stoll(parts[0]), std::stoll(parts[1])};
}

}  // namespace

void WriteManifest(const std::string& path, const Manifest& m) {
  std::ofstream f(path, std::ios::trunc);
  VCAM_CHECK(f.good(), "cannot open " << path << " for writing");
  for (const auto& r : m.records) {
    std::string tracks, refs, intervals;
    for (size_t i = 0; i < r.track_paths.size(); ++i) {
      if (i) tracks += ',';
      tracks += r.track_paths[i];
    }
    for (size_t i = 0; i < r.refs.size(); ++i) {
      if (i) refs += ',';
      refs += JoinTokens(r.refs[i]);
    }
    for (size_t i = 0; i < r.speech_intervals.size(); ++i) {
      if (i) intervals += ',';
      intervals += IntervalString(r.speech_intervals[i]);
    }
    f << r.id << '\t' << ScenarioName(r.scenario) << '\t' << r.audio_path
      << '\t' << tracks << '\t' << refs << '\t' << intervals << '\t'
      << (r.has_overlap ? IntervalString(r.overlap_interval) : "-") << '\n';
  }
  VCAM_CHECK(f.good(), "write failed for " << path);
}

Manifest ReadManifest(const std::string& path) {
  std::ifstream f(path);
  VCAM_CHECK(f.good(), "cannot open manifest " << path);
  Manifest m;
  m.base_dir = fs::path(path).parent_path().string();
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto fields = SplitOn(line, '\t');
    VCAM_CHECK(fields.size() == 7, "manifest line with " << fields.size()
                                                         << " fields: " << line);
    ManifestRecord r;
    r.id = fields[0];
    r.scenario = ParseScenario(fields[1]);
    r.audio_path = fields[2];
    r.track_paths = SplitOn(fields[3], ',');
    for (const auto& part : SplitOn(fields[4], ',')) {
      r.refs.push_back(SplitTokens(part));
    }
    for (const auto& part : SplitOn(fields[5], ',')) {
      r.speech_intervals.push_back(ParseInterval(part));
    }
    if (fields[6] != "-") {
      r.has_overlap = true;
      r.overlap_interval = ParseInterval(fields[6]);
    }
    VCAM_CHECK(r.track_paths.size() == r.refs.size() &&
                   r.refs.size() == r.speech_intervals.size(),
               "inconsistent channel counts in record " << r.id);
    m.records.push_back(std::move(r));
  }
  return m;
}

void WriteExample(const std::string& dir, const OverlappedExample& ex,
                  ManifestRecord* rec) {
  const fs::path examples = fs::path(dir) / "examples";
  fs::create_directories(examples);
  rec->id = ex.id;
  rec->scenario = ex.scenario;
  rec->refs = ex.refs;
  rec->speech_intervals = ex.speech_intervals;
  rec->has_overlap = ex.scenario == Scenario::kOverlap;
  rec->overlap_interval = ex.overlap_interval;
  rec->audio_path = "examples/" + ex.id + ".audio.vct";
  numcore::SaveTensor((fs::path(dir) / rec->audio_path).string(), ex.audio_raw);
  rec->track_paths.clear();
  for (int m = 0; m < ex.num_tracks(); ++m) {
    const std::string rel =
        "examples/" + ex.id + ".track" + std::to_string(m) + ".vct";
    numcore::SaveTensor((fs::path(dir) / rel).string(), ex.tracks[m]);
    rec->track_paths.push_back(rel);
  }
}

OverlappedExample LoadExample(const Manifest& manifest,
                              const ManifestRecord& rec) {
  OverlappedExample ex;
  ex.id = rec.id;
  ex.scenario = rec.scenario;
  ex.refs = rec.refs;
  ex.speech_intervals = rec.speech_intervals;
  ex.overlap_interval = rec.overlap_interval;
  const fs::path base(manifest.base_dir);
  ex.audio_raw = numcore::LoadTensor((base / rec.audio_path).string());
  for (const auto& rel : rec.track_paths) {
    ex.tracks.push_back(numcore::LoadTensor((base / rel).string()));
    VCAM_CHECK(ex.tracks.back().dim(0) == ex.audio_raw.dim(0),
               "track/audio length mismatch in " << rec.id);
  }
  return ex;
}

void CorpusConfig::validate() const {
  VCAM_CHECK(n_train >= 2 && n_train % 2 == 0,
             "n_train must be even to split 50/50, got " << n_train);
  VCAM_CHECK(n_test >= 1, "n_test must be positive");
  VCAM_CHECK(utt_min_s > 0 && utt_max_s >= utt_min_s, "bad duration range");
  // overlaps run up to 5 s; utterances must be able to exceed any overlap
  VCAM_CHECK(utt_max_s > 5.2, "utt_max_s must exceed 5.2 s so every overlap "
                              "in [1,5] s fits inside both utterances");
  VCAM_CHECK(frames_per_token >= 2, "frames_per_token must be at least 2");
  VCAM_CHECK(train_speakers >= 2 && test_speakers >= 2,
             "need at least two speakers per pool");
  VCAM_CHECK(noise_level >= 0.0 && noise_level < 1.0, "bad noise level");
}

namespace {

class UtteranceFactory {
 public:
  UtteranceFactory(const CorpusConfig& cfg, const synthgen::TokenBank& bank,
                   uint64_t speaker_base, int speaker_count,
                   std::mt19937_64& rng)
      : cfg_(cfg), bank_(bank), speaker_base_(speaker_base),
        speaker_count_(speaker_count), rng_(rng) {}

  // duration at token granularity, at least min_s
  synthgen::AVUtterance make(double min_s, int64_t exclude_speaker = -1) {
    std::uniform_int_distribution<int> spk(0, speaker_count_ - 1);
    int64_t speaker;
    do {
      speaker = speaker_base_ + static_cast<uint64_t>(spk(rng_));
    } while (speaker == exclude_speaker);
    const double lo = std::max(cfg_.utt_min_s, min_s);
    std::uniform_real_distribution<double> dur(lo, cfg_.utt_max_s);
    const double token_s = cfg_.frames_per_token * kFramePeriodSeconds;
    int tokens = static_cast<int>(dur(rng_) / token_s + 0.5);
    tokens = std::max(tokens, static_cast<int>(lo / token_s) + 1);
    std::uniform_int_distribution<int> tok(1, cfg_.synth.vocab);
    std::vector<int> labels(static_cast<size_t>(tokens));
    for (auto& y : labels) y = tok(rng_);
    const auto profile = synthgen::sample_speaker(cfg_.synth,
                                                  static_cast<uint64_t>(speaker));
    return synthgen::synth_utterance(cfg_.synth, bank_, profile, labels,
                                     cfg_.frames_per_token, cfg_.noise_level,
                                     rng_());
  }

 private:
  const CorpusConfig& cfg_;
  const synthgen::TokenBank& bank_;
  uint64_t speaker_base_;
  int speaker_count_;
  std::mt19937_64& rng_;
};

std::string PadId(const char* prefix, int i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%06d", prefix, i);
  return buf;
}

}  // namespace

void WriteCorpusMeta(const std::string& path, const CorpusConfig& cfg) {
  std::ofstream f(path, std::ios::trunc);
  VCAM_CHECK(f.good(), "cannot open " << path);
  f << "vocab=" << cfg.synth.vocab << "\n"
    << "bands=" << cfg.synth.bands << "\n"
    << "thumb_hw=" << cfg.synth.thumb_hw << "\n"
    << "frames_per_token=" << cfg.frames_per_token << "\n"
    << "seed=" << cfg.seed << "\n"
    << "n_train=" << cfg.n_train << "\n"
    << "n_test=" << cfg.n_test << "\n";
  VCAM_CHECK(f.good(), "write failed for " << path);
}

CorpusConfig ReadCorpusMeta(const std::string& path) {
  std::ifstream f(path);
  VCAM_CHECK(f.good(), "cannot open corpus meta " << path);
  CorpusConfig cfg;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    VCAM_CHECK(eq != std::string::npos, "bad corpus.meta line: " << line);
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "vocab") cfg.synth.vocab = std::stoi(value);
    else if (key == "bands") cfg.synth.bands = std::stoi(value);
    else if (key == "thumb_hw") cfg.synth.thumb_hw = std::stoi(value);
    else if (key == "frames_per_token") cfg.frames_per_token = std::stoi(value);
    else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "n_train") cfg.n_train = std::stoi(value);
    else if (key == "n_test") cfg.n_test = std::stoi(value);
    else throw Error("unknown corpus.meta key: " + key);
  }
  cfg.synth.corpus_seed = cfg.seed;
  return cfg;
}

void build_corpus(const CorpusConfig& config, const std::string& out_dir) {
  CorpusConfig cfg = config;
  cfg.validate();
  cfg.synth.corpus_seed = cfg.seed;
  fs::create_directories(out_dir);
  const synthgen::TokenBank bank(cfg.synth);

  std::mt19937_64 rng(cfg.seed);
  UtteranceFactory train_fab(cfg, bank, 0, cfg.train_speakers, rng);
  UtteranceFactory test_fab(cfg, bank, 100000, cfg.test_speakers, rng);

  auto make_overlap_example = [&](UtteranceFactory& fab) {
    const double ov = sample_overlap_seconds(rng);
    auto u1 = fab.make(ov + 0.2);
    auto u2 = fab.make(ov + 0.2, u1.speaker_id);
    return make_overlap(u1, u2, ov);
  };
  auto make_twoface_example = [&](UtteranceFactory& fab) {
    auto u = fab.make(0.0);
    auto d = fab.make(0.0, u.speaker_id);
    return make_twoface(u, d);
  };

  // training manifest: alternating Overlap / TwoFace, exactly half each
  Manifest train;
  for (int i = 0; i < cfg.n_train; ++i) {
    OverlappedExample ex = (i % 2 == 0) ? make_overlap_example(train_fab)
                                        : make_twoface_example(train_fab);
    ex.id = PadId("tr", i);
    ManifestRecord rec;
    WriteExample(out_dir, ex, &rec);
    train.records.push_back(rec);
  }
  WriteManifest((fs::path(out_dir) / "train.manifest").string(), train);

  Manifest test_ov, test_tf, test_of;
  for (int i = 0; i < cfg.n_test; ++i) {
    auto ex = make_overlap_example(test_fab);
    ex.id = PadId("ov", i);
    ManifestRecord rec;
    WriteExample(out_dir, ex, &rec);
    test_ov.records.push_back(rec);
  }
  for (int i = 0; i < cfg.n_test; ++i) {
    auto ex = make_twoface_example(test_fab);
    ex.id = PadId("tf", i);
    ManifestRecord rec;
    WriteExample(out_dir, ex, &rec);
    test_tf.records.push_back(rec);
  }
  for (int i = 0; i < cfg.n_test; ++i) {
    auto ex = make_oneface(test_fab.make(0.0));
    ex.id = PadId("of", i);
    ManifestRecord rec;
    WriteExample(out_dir, ex, &rec);
    test_of.records.push_back(rec);
  }
  WriteManifest((fs::path(out_dir) / "test_overlap.manifest").string(), test_ov);
  WriteManifest((fs::path(out_dir) / "test_twoface.manifest").string(), test_tf);
  WriteManifest((fs::path(out_dir) / "test_oneface.manifest").string(), test_of);
  WriteCorpusMeta((fs::path(out_dir) / "corpus.meta").string(), cfg);
}

}  // namespace vcam::simcorpus
