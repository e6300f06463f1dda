// vcam/simcorpus.h

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

#ifndef VCAM_SIMCORPUS_H_
#define VCAM_SIMCORPUS_H_

#include <array>
#include <random>
#include <string>
#include <vector>

#include "vcam/synthgen.h"

// Simulated overlapping-speech corpus construction: two-speaker offset
// mixing (additive in the energy domain), video tracks extended over the
// whole mixed span by forward-backward repetition, the TwoFace and OneFace
// single-speaker scenarios, and line-delimited manifests.

namespace vcam::simcorpus {

enum class Scenario { kOverlap, kTwoFace, kOneFace };

const char* ScenarioName(Scenario s);
Scenario ParseScenario(const std::string& name);

struct OverlappedExample {
  std::string id;
  Scenario scenario = Scenario::kOverlap;
  numcore::Tensor<float> audio_raw;                  // F x B mixed energies
  std::vector<numcore::Tensor<float>> tracks;        // M of F x H x W x 3
  std::vector<std::vector<int>> refs;                // M label sequences
  std::vector<std::array<int64_t, 2>> speech_intervals;  // [start,end) frames
  std::array<int64_t, 2> overlap_interval{0, 0};
  // per-frame source speaker of each track (-1 for blank thumbnails); used
  // by the no-cross-speaker-leakage checks, not persisted
  std::vector<std::vector<int64_t>> track_speakers;

  int64_t frames() const { return audio_raw.dim(0); }
  int num_tracks() const { return static_cast<int>(tracks.size()); }
};

// Uniform in [1,5] seconds.
double sample_overlap_seconds(std::mt19937_64& rng);

// Source indices for extending an n-frame sequence by `gap` frames on the
// given side, reflecting with period 2(n-1) (constant repetition for n = 1).
// Returned in chronological order.
std::vector<int64_t> pingpong_indices(int64_t n, int64_t gap, bool before);

// Offsets u2 so the two speech spans overlap by overlap_s seconds, sums the
// energy frames over the union span, and extends both mouth-tracks across
// the full span with forward-backward fill. Channel 0 is the earlier speaker.
OverlappedExample make_overlap(const synthgen::AVUtterance& u1,
                               const synthgen::AVUtterance& u2,
                               double overlap_s);

// Single speaker plus a silent on-screen face from a different speaker.
OverlappedExample make_twoface(const synthgen::AVUtterance& u,
                               const synthgen::AVUtterance& distractor);

// Single speaker with blank thumbnails on the second track.
OverlappedExample make_oneface(const synthgen::AVUtterance& u);

struct ManifestRecord {
  std::string id;
  Scenario scenario = Scenario::kOverlap;
  std::string audio_path;                 // relative to the manifest dir
  std::vector<std::string> track_paths;
  std::vector<std::vector<int>> refs;
  std::vector<std::array<int64_t, 2>> speech_intervals;
  bool has_overlap = false;
  std::array<int64_t, 2> overlap_interval{0, 0};
};

struct Manifest {
  std::string base_dir;  // set on read; not serialized
  std::vector<ManifestRecord> records;
};

void WriteManifest(const std::string& path, const Manifest& m);
Manifest ReadManifest(const std::string& path);

// Payload round trip. WriteExample stores the audio and tracks as tensor
// container files under dir/examples and fills the record's paths.
void WriteExample(const std::string& dir, const OverlappedExample& ex,
                  ManifestRecord* rec);
OverlappedExample LoadExample(const Manifest& manifest,
                              const ManifestRecord& rec);

struct CorpusConfig {
  int n_train = 2000;   // must be even: half Overlap, half TwoFace
  int n_test = 200;     // per test manifest
  uint64_t seed = 1;
  double utt_min_s = 3.0;
  double utt_max_s = 8.0;
  int frames_per_token = 6;
  double noise_level = 0.05;
  int train_speakers = 64;
  int test_speakers = 16;
  synthgen::SynthConfig synth;

  void validate() const;
};

// Writes train.manifest (exactly 50/50 Overlap/TwoFace), test_overlap,
// test_twoface and test_oneface manifests plus all payloads and a corpus.meta
// describing the generation parameters. Byte-identical for a fixed config.
void build_corpus(const CorpusConfig& cfg, const std::string& out_dir);

// corpus.meta round trip, needed by training to size the model.
void WriteCorpusMeta(const std::string& path, const CorpusConfig& cfg);
CorpusConfig ReadCorpusMeta(const std::string& path);

}  // namespace vcam::simcorpus

#endif  // VCAM_SIMCORPUS_H_
