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

#include <cstdint>
#include <optional>
#include <string>

namespace mtmct::cli {

struct SimulateArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
};

struct TrainMetricArgs {
  std::string scenario_dir;
  std::string mode;  // intra | inter | global
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  bool strict_neighbors = false;
  std::string dump_pairs_path;
};

struct TrackArgs {
  std::string scenario_dir;
  std::string sct_spec;  // baseline | oracle | global:<file> | intra:<file> | inter:<file> | metric:<file>
  std::string mct_spec;
  std::string config_path;
  std::string out_prefix;
};

struct EvaluateArgs {
  std::string scenario_dir;
  std::string result_prefix;
  std::string report_path;  // defaults to <result_prefix>.scores.txt
};

struct CompareArgs {
  std::string scenario_dir;
  std::string config_path;
  int seeds = 5;
  std::string sweep;  // "", "tau_s", or "tau_m"
  std::string grid;   // comma-separated window lengths
  bool strict_neighbors = false;
  std::string out_path;
};

int cmd_simulate(const SimulateArgs& args);
int cmd_train_metric(const TrainMetricArgs& args);
int cmd_track(const TrackArgs& args);
int cmd_evaluate(const EvaluateArgs& args);
int cmd_compare(const CompareArgs& args);

}  // namespace mtmct::cli
