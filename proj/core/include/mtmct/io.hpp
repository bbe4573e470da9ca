// Copyright 2026 The mtmct Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mtmct/metricnet.hpp"
#include "mtmct/pipeline.hpp"
#include "mtmct/sampler.hpp"
#include "mtmct/simgen.hpp"
#include "mtmct/types.hpp"

namespace mtmct::io {

/// Flat `key = value` text configuration ('#' starts a comment). Keys are
/// written back in sorted order so saved files are reproducible.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig load(const std::filesystem::path& path);
  static KeyValueConfig parse(const std::string& text);

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  void set(const std::string& key, const std::string& value) {
    values_[key] = value;
  }

  void save(const std::filesystem::path& path) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// One line of a detection/truth/result file:
/// camera,frame,identity,x,y,feature_row -- identity may be empty.
struct RecordRow {
  int camera = 0;
  int frame = 0;
  std::optional<int> identity;
  Eigen::Vector2d center{0.0, 0.0};
  int feature_row = -1;
};

void write_record_file(const std::filesystem::path& path,
                       std::span<const RecordRow> rows);
std::vector<RecordRow> read_record_file(const std::filesystem::path& path);

/// Binary feature container: magic, version, dimension, row count, then
/// row-major little-endian 64-bit floats.
void write_feature_container(const std::filesystem::path& path,
                             std::span<const FeatureVector> rows, int dim);
std::vector<FeatureVector> read_feature_container(
    const std::filesystem::path& path);

/// Pair datasets reuse the feature container with one extra trailing column
/// holding the 0/1 label. Pair provenance is not persisted.
void write_pair_samples(const std::filesystem::path& path,
                        std::span<const PairSample> samples, int dim);
std::vector<PairSample> read_pair_samples(const std::filesystem::path& path);

void write_topology(const std::filesystem::path& path,
                    const CameraTopology& topology);
CameraTopology read_topology(const std::filesystem::path& path);

/// Scenario directory layout: detections.txt, truth.txt, features.bin,
/// topology.txt, meta.txt.
void save_scenario(const std::filesystem::path& dir, const Scenario& scenario);
Scenario load_scenario(const std::filesystem::path& dir);

/// Key/value score report, keys sorted.
void write_score_report(
    const std::filesystem::path& path,
    const std::vector<std::pair<std::string, std::string>>& entries);

// Config-schema readers. Every key is optional; the fallback is the
// parameter default.
SimConfig sim_config_from(const KeyValueConfig& kv);
SamplerConfig sampler_config_from(const KeyValueConfig& kv);
TrainConfig train_config_from(const KeyValueConfig& kv);
PipelineConfig pipeline_config_from(const KeyValueConfig& kv);

/// Round-trip double formatting ("%.17g") shared by all text writers.
std::string format_double(double v);

}  // namespace mtmct::io
