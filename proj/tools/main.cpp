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

#include <CLI11.hpp>
#include <exception>
#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"multi-target multi-camera tracking testbed"};
  app.require_subcommand(1);

  mtmct::cli::SimulateArgs sim;
  std::uint64_t sim_seed = 0;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "generate a synthetic multi-camera scenario");
  simulate->add_option("--config", sim.config_path, "key/value config file")
      ->required();
  simulate->add_option("--out", sim.out_dir, "output scenario directory")
      ->required();
  CLI::Option* sim_seed_opt =
      simulate->add_option("--seed", sim_seed, "override sim.seed");

  mtmct::cli::TrainMetricArgs tm;
  std::uint64_t tm_seed = 0;
  CLI::App* train = app.add_subcommand(
      "train-metric", "sample pairs and train a pair-classifier metric");
  train->add_option("--scenario", tm.scenario_dir, "scenario directory")
      ->required();
  train->add_option("--mode", tm.mode, "intra | inter | global")->required();
  train->add_option("--config", tm.config_path, "key/value config file");
  train->add_option("--out", tm.out_path, "output parameter file")->required();
  CLI::Option* tm_seed_opt =
      train->add_option("--seed", tm_seed, "override sampler/train seed");
  train->add_flag("--strict-neighbors", tm.strict_neighbors,
                  "restrict cross-camera positives to topology neighbors");
  train->add_option("--dump-pairs", tm.dump_pairs_path,
                    "also write the sampled pair dataset");

  mtmct::cli::TrackArgs tr;
  CLI::App* track =
      app.add_subcommand("track", "run the association pipeline on a scenario");
  track->add_option("--scenario", tr.scenario_dir, "scenario directory")
      ->required();
  track->add_option("--sct", tr.sct_spec,
                    "single-camera scorer (baseline, oracle, or kind:<file>)")
      ->required();
  track->add_option("--mct", tr.mct_spec, "cross-camera scorer")->required();
  track->add_option("--config", tr.config_path, "key/value config file");
  track->add_option("--out", tr.out_prefix, "result file prefix")->required();

  mtmct::cli::EvaluateArgs ev;
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "score a result against the ground truth");
  evaluate->add_option("--scenario", ev.scenario_dir, "scenario directory")
      ->required();
  evaluate->add_option("--result", ev.result_prefix, "result file prefix")
      ->required();
  evaluate->add_option("--out", ev.report_path,
                       "report path (default <result>.scores.txt)");

  mtmct::cli::CompareArgs cp;
  CLI::App* compare = app.add_subcommand(
      "compare", "train all metrics and tabulate the scorer variants");
  compare->add_option("--scenario", cp.scenario_dir, "scenario directory")
      ->required();
  compare->add_option("--config", cp.config_path, "key/value config file");
  compare->add_option("--seeds", cp.seeds, "number of seeds (median reported)");
  compare->add_option("--sweep", cp.sweep, "sweep one window: tau_s | tau_m");
  compare->add_option("--grid", cp.grid, "comma-separated window lengths");
  compare->add_flag("--strict-neighbors", cp.strict_neighbors,
                    "restrict cross-camera positives to topology neighbors");
  compare->add_option("--out", cp.out_path, "also write the table to a file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      if (*sim_seed_opt) {
        sim.seed = sim_seed;
      }
      return mtmct::cli::cmd_simulate(sim);
    }
    if (train->parsed()) {
      if (*tm_seed_opt) {
        tm.seed = tm_seed;
      }
      return mtmct::cli::cmd_train_metric(tm);
    }
    if (track->parsed()) {
      return mtmct::cli::cmd_track(tr);
    }
    if (evaluate->parsed()) {
      return mtmct::cli::cmd_evaluate(ev);
    }
    if (compare->parsed()) {
      return mtmct::cli::cmd_compare(cp);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
