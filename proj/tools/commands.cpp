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

#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "mtmct/eval.hpp"
#include "mtmct/io.hpp"
#include "mtmct/metricnet.hpp"
#include "mtmct/pipeline.hpp"
#include "mtmct/sampler.hpp"
#include "mtmct/scorer.hpp"
#include "mtmct/simgen.hpp"

namespace mtmct::cli {

namespace {

namespace fs = std::filesystem;

io::KeyValueConfig load_config(const std::string& path) {
  if (path.empty()) {
    return {};
  }
  return io::KeyValueConfig::load(path);
}

std::vector<Detection> frames_below(const std::vector<Detection>& detections,
                                    int split) {
  std::vector<Detection> out;
  for (const Detection& d : detections) {
    if (d.frame < split) {
      out.push_back(d);
    }
  }
  return out;
}

std::vector<Detection> frames_from(const std::vector<Detection>& detections,
                                   int split) {
  std::vector<Detection> out;
  for (const Detection& d : detections) {
    if (d.frame >= split) {
      out.push_back(d);
    }
  }
  return out;
}

std::vector<ObservationRecord> truth_from(
    const std::vector<ObservationRecord>& truth, int split) {
  std::vector<ObservationRecord> out;
  for (const ObservationRecord& r : truth) {
    if (r.frame >= split) {
      out.push_back(r);
    }
  }
  return out;
}

double train_fraction(const io::KeyValueConfig& kv) {
  return kv.get_double("split.train_fraction", 0.8);
}

// Train-split ground-truth tracklets plus the distance statistics computed
// from globally sampled pairs over them.
struct TrainProducts {
  std::vector<Tracklet> tracklets;
  DistanceStats stats{0.0, 1.0};
};

TrainProducts train_products(const Scenario& scenario,
                             const io::KeyValueConfig& kv,
                             std::uint64_t seed_offset) {
  const int split = scenario.split_frame(train_fraction(kv));
  const PipelineConfig pipe = io::pipeline_config_from(kv);
  TrainProducts out;
  out.tracklets = ground_truth_tracklets(
      frames_below(scenario.detections, split), pipe.tracklet_len);

  SamplerConfig sampler = io::sampler_config_from(kv);
  sampler.seed += seed_offset;
  const std::vector<PairSample> pairs = sample_global(out.tracklets, sampler);
  out.stats = compute_stats_from_samples(pairs);
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

// "baseline", "oracle", or "<kind>:<parameter file>".
Scorer scorer_from_spec(const std::string& spec, const DistanceStats& stats) {
  const std::string s = lower(spec);
  if (s == "baseline") {
    return make_baseline_scorer(stats);
  }
  if (s == "oracle") {
    return make_oracle_scorer();
  }
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const std::string kind = lower(spec.substr(0, colon));
    const std::string path = spec.substr(colon + 1);
    if (kind == "global" || kind == "intra" || kind == "inter" ||
        kind == "metric") {
      return make_metric_scorer(load_metric_network(path));
    }
  }
  throw std::runtime_error(
      "unknown scorer spec '" + spec +
      "' (expected baseline, oracle, or global:/intra:/inter:/metric:<file>)");
}

void write_result_records(const fs::path& path,
                          const std::vector<ObservationRecord>& records,
                          const std::map<std::pair<int, int>, int>& feature_rows) {
  std::vector<io::RecordRow> rows;
  rows.reserve(records.size());
  for (const ObservationRecord& r : records) {
    io::RecordRow row;
    row.camera = r.camera_id;
    row.frame = r.frame;
    row.identity = r.id;
    row.center = r.center;
    auto it = feature_rows.find({r.camera_id, r.frame});
    row.feature_row = it == feature_rows.end() ? -1 : it->second;
    rows.push_back(row);
  }
  std::sort(rows.begin(), rows.end(),
            [](const io::RecordRow& a, const io::RecordRow& b) {
              if (a.camera != b.camera) return a.camera < b.camera;
              if (a.frame != b.frame) return a.frame < b.frame;
              if (a.identity != b.identity) return a.identity < b.identity;
              if (a.center.x() != b.center.x())
                return a.center.x() < b.center.x();
              return a.center.y() < b.center.y();
            });
  io::write_record_file(path, rows);
}

std::vector<ObservationRecord> records_from_rows(
    const std::vector<io::RecordRow>& rows, const std::string& what) {
  std::vector<ObservationRecord> out;
  out.reserve(rows.size());
  for (const io::RecordRow& r : rows) {
    if (!r.identity) {
      throw std::runtime_error("record without id in " + what);
    }
    out.push_back(ObservationRecord{r.camera, r.frame, *r.identity, r.center});
  }
  return out;
}

struct VariantScores {
  bool available = false;
  double sct_idf1 = 0.0;
  double mct_idf1 = 0.0;
};

double median(std::vector<double> v) {
  if (v.empty()) {
    return 0.0;
  }
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Association stages from precomputed tracklets (the tracklet stage does
// not depend on the variant, so compare reuses it across variants).
TrackingResult run_from_tracklets(std::vector<Tracklet> tracklets,
                                  const CameraTopology& topology,
                                  const Scorer& sct, const Scorer& mct,
                                  const PipelineConfig& cfg) {
  TrackingResult result;
  result.tracklets = std::move(tracklets);
  std::size_t begin = 0;
  while (begin < result.tracklets.size()) {
    const int camera = result.tracklets[begin].camera_id;
    std::size_t end = begin;
    while (end < result.tracklets.size() &&
           result.tracklets[end].camera_id == camera) {
      ++end;
    }
    std::span<const Tracklet> batch(result.tracklets.data() + begin,
                                    end - begin);
    for (Trajectory& t : single_camera_tracking(batch, sct, cfg)) {
      result.trajectories.push_back(std::move(t));
    }
    begin = end;
  }
  result.tracks =
      multi_camera_tracking(result.trajectories, mct, topology, cfg);
  return result;
}

}  // namespace

int cmd_simulate(const SimulateArgs& args) {
  io::KeyValueConfig kv = io::KeyValueConfig::load(args.config_path);
  SimConfig cfg = io::sim_config_from(kv);
  if (args.seed) {
    cfg.seed = *args.seed;
  }
  const Scenario scenario = generate(cfg);
  io::save_scenario(args.out_dir, scenario);

  std::cout << "cameras " << scenario.topology.camera_ids().size() << "\n";
  std::cout << "identities " << cfg.identities << "\n";
  std::cout << "detections " << scenario.detections.size() << "\n";
  const std::vector<double> by_hops =
      same_identity_distance_by_hops(scenario, 2000, cfg.seed);
  for (std::size_t h = 0; h < by_hops.size(); ++h) {
    std::cout << "same_identity_distance_hops_" << h << " "
              << io::format_double(by_hops[h]) << "\n";
  }
  return 0;
}

int cmd_train_metric(const TrainMetricArgs& args) {
  const Scenario scenario = io::load_scenario(args.scenario_dir);
  const io::KeyValueConfig kv = load_config(args.config_path);

  const int split = scenario.split_frame(train_fraction(kv));
  const PipelineConfig pipe = io::pipeline_config_from(kv);
  const std::vector<Tracklet> tracklets = ground_truth_tracklets(
      frames_below(scenario.detections, split), pipe.tracklet_len);

  SamplerConfig sampler = io::sampler_config_from(kv);
  sampler.strict_neighbors = sampler.strict_neighbors || args.strict_neighbors;
  TrainConfig train_cfg = io::train_config_from(kv);
  if (args.seed) {
    sampler.seed = *args.seed;
    train_cfg.seed = *args.seed;
  }

  const std::string mode = lower(args.mode);
  std::vector<PairSample> samples;
  if (mode == "intra") {
    samples = sample_intra(tracklets, sampler);
  } else if (mode == "inter") {
    samples = sample_inter(tracklets, scenario.topology, sampler);
  } else if (mode == "global") {
    samples = sample_global(tracklets, sampler);
  } else {
    throw std::runtime_error("unknown mode '" + args.mode +
                             "' (expected intra, inter, or global)");
  }
  if (!args.dump_pairs_path.empty()) {
    io::write_pair_samples(args.dump_pairs_path, samples,
                           scenario.feature_dim());
  }

  MetricNetwork net =
      init_metric_network(scenario.feature_dim(), train_cfg.seed);
  const TrainResult result = train(std::move(net), samples, train_cfg);
  save_metric_network(result.net, args.out_path);

  std::cout << "mode " << mode << "\n";
  std::cout << "pairs " << samples.size() << "\n";
  std::cout << "final_loss "
            << io::format_double(result.epoch_mean_loss.empty()
                                     ? 0.0
                                     : result.epoch_mean_loss.back())
            << "\n";
  std::cout << "train_accuracy " << io::format_double(result.final_accuracy)
            << "\n";
  return 0;
}

int cmd_track(const TrackArgs& args) {
  const Scenario scenario = io::load_scenario(args.scenario_dir);
  const io::KeyValueConfig kv = load_config(args.config_path);
  const PipelineConfig pipe = io::pipeline_config_from(kv);

  const TrainProducts products = train_products(scenario, kv, 0);
  const int split = scenario.split_frame(train_fraction(kv));
  const std::vector<Detection> test = frames_from(scenario.detections, split);

  StageScorers scorers;
  scorers.tracklet = make_baseline_scorer(products.stats);
  scorers.sct = scorer_from_spec(args.sct_spec, products.stats);
  scorers.mct = scorer_from_spec(args.mct_spec, products.stats);

  const TrackingResult result = run(test, scenario.topology, scorers, pipe);

  // feature_row bookkeeping for the result files: a camera/frame pair maps
  // back to the scenario detection that produced the observation.
  std::map<std::pair<int, int>, int> feature_rows;
  for (const Detection& d : test) {
    feature_rows.emplace(std::make_pair(d.camera_id, d.frame), d.feature_row);
  }
  const fs::path prefix(args.out_prefix);
  if (prefix.has_parent_path()) {
    fs::create_directories(prefix.parent_path());
  }
  write_result_records(args.out_prefix + ".sct.txt", sct_records(result),
                       feature_rows);
  write_result_records(args.out_prefix + ".mct.txt", mct_records(result),
                       feature_rows);

  std::cout << "tracklets " << result.tracklets.size() << "\n";
  std::cout << "trajectories " << result.trajectories.size() << "\n";
  std::cout << "tracks " << result.tracks.size() << "\n";
  return 0;
}

int cmd_evaluate(const EvaluateArgs& args) {
  const Scenario scenario = io::load_scenario(args.scenario_dir);
  const io::KeyValueConfig kv;  // evaluation uses scenario metadata only

  const int split = scenario.split_frame(train_fraction(kv));
  const std::vector<ObservationRecord> truth =
      truth_from(scenario.truth, split);

  const std::vector<ObservationRecord> sct_rows = records_from_rows(
      io::read_record_file(args.result_prefix + ".sct.txt"), "result");
  const std::vector<ObservationRecord> mct_rows = records_from_rows(
      io::read_record_file(args.result_prefix + ".mct.txt"), "result");

  const double radius = scenario.match_radius();
  const IdScores sct = id_measures_per_camera(truth, sct_rows, radius);
  const IdScores mct = id_measures(truth, mct_rows, radius);

  std::vector<std::pair<std::string, std::string>> report;
  auto add = [&](const std::string& level, const IdScores& s) {
    report.emplace_back(level + ".idtp", std::to_string(s.idtp));
    report.emplace_back(level + ".idfp", std::to_string(s.idfp));
    report.emplace_back(level + ".idfn", std::to_string(s.idfn));
    report.emplace_back(level + ".idf1", io::format_double(s.idf1));
    report.emplace_back(level + ".idp", io::format_double(s.idp));
    report.emplace_back(level + ".idr", io::format_double(s.idr));
  };
  add("sct", sct);
  add("mct", mct);

  for (const auto& [key, value] : report) {
    std::cout << key << " = " << value << "\n";
  }
  const std::string report_path = args.report_path.empty()
                                      ? args.result_prefix + ".scores.txt"
                                      : args.report_path;
  io::write_score_report(report_path, report);
  return 0;
}

int cmd_compare(const CompareArgs& args) {
  const Scenario scenario = io::load_scenario(args.scenario_dir);
  const io::KeyValueConfig kv = load_config(args.config_path);
  const PipelineConfig pipe = io::pipeline_config_from(kv);
  const int seeds = args.seeds > 0 ? args.seeds : kv.get_int("compare.seeds", 5);

  const int split = scenario.split_frame(train_fraction(kv));
  const std::vector<Detection> test = frames_from(scenario.detections, split);
  const std::vector<ObservationRecord> truth =
      truth_from(scenario.truth, split);
  const double radius = scenario.match_radius();

  std::ostringstream table;

  const bool sweeping = !args.sweep.empty();
  if (sweeping && args.sweep != "tau_s" && args.sweep != "tau_m") {
    throw std::runtime_error("--sweep expects tau_s or tau_m");
  }
  std::vector<int> grid;
  if (sweeping) {
    if (args.grid.empty()) {
      throw std::runtime_error("--sweep needs --grid <comma list>");
    }
    std::istringstream gs(args.grid);
    std::string token;
    while (std::getline(gs, token, ',')) {
      grid.push_back(std::stoi(token));
    }
  }

  // Per-seed training products are shared across variants and grid points.
  struct SeedProducts {
    std::vector<Tracklet> tracklets;       // pipeline tracklets on the test split
    std::optional<DistanceStats> stats;
    std::optional<MetricNetwork> intra;
    std::optional<MetricNetwork> inter;
    std::optional<MetricNetwork> global;
    std::string inter_error;
  };

  SamplerConfig base_sampler = io::sampler_config_from(kv);
  base_sampler.strict_neighbors =
      base_sampler.strict_neighbors || args.strict_neighbors;
  const TrainConfig base_train = io::train_config_from(kv);

  auto train_one = [&](const std::vector<PairSample>& samples,
                       std::uint64_t seed) {
    TrainConfig cfg = base_train;
    cfg.seed = seed;
    MetricNetwork net = init_metric_network(scenario.feature_dim(), seed);
    return train(std::move(net), samples, cfg).net;
  };

  std::vector<SeedProducts> per_seed(static_cast<std::size_t>(seeds));
  for (int s = 0; s < seeds; ++s) {
    SeedProducts& p = per_seed[static_cast<std::size_t>(s)];
    const std::uint64_t seed = base_sampler.seed + static_cast<std::uint64_t>(s);
    SamplerConfig sampler = base_sampler;
    sampler.seed = seed;

    const std::vector<Tracklet> train_tracklets = ground_truth_tracklets(
        frames_below(scenario.detections, split), pipe.tracklet_len);

    const std::vector<PairSample> global_pairs =
        sample_global(train_tracklets, sampler);
    p.stats = compute_stats_from_samples(global_pairs);
    p.global = train_one(global_pairs, seed);
    p.intra = train_one(sample_intra(train_tracklets, sampler), seed);
    try {
      p.inter = train_one(
          sample_inter(train_tracklets, scenario.topology, sampler), seed);
    } catch (const std::exception& e) {
      p.inter_error = e.what();
    }

    p.tracklets = form_tracklets(test, pipe, make_baseline_scorer(*p.stats));
  }

  auto variant_scorer = [&](const SeedProducts& p,
                            const std::string& kind) -> std::optional<Scorer> {
    if (kind == "baseline") {
      return make_baseline_scorer(*p.stats);
    }
    if (kind == "global") {
      return make_metric_scorer(*p.global);
    }
    if (kind == "intra") {
      return make_metric_scorer(*p.intra);
    }
    if (kind == "inter") {
      if (!p.inter) {
        return std::nullopt;
      }
      return make_metric_scorer(*p.inter);
    }
    throw std::logic_error("bad variant kind " + kind);
  };

  auto evaluate_variant = [&](const std::string& sct_kind,
                              const std::string& mct_kind) -> VariantScores {
    std::vector<double> sct_scores, mct_scores;
    for (const SeedProducts& p : per_seed) {
      const std::optional<Scorer> sct = variant_scorer(p, sct_kind);
      const std::optional<Scorer> mct = variant_scorer(p, mct_kind);
      if (!sct || !mct) {
        return {};
      }
      const TrackingResult result =
          run_from_tracklets(p.tracklets, scenario.topology, *sct, *mct, pipe);
      sct_scores.push_back(
          id_measures_per_camera(truth, sct_records(result), radius).idf1);
      mct_scores.push_back(
          id_measures(truth, mct_records(result), radius).idf1);
    }
    return VariantScores{true, median(sct_scores), median(mct_scores)};
  };

  char line[160];
  if (!sweeping) {
    const std::vector<std::pair<std::string, std::string>> variants = {
        {"baseline", "baseline"}, {"global", "global"}, {"intra", "global"},
        {"global", "inter"},      {"intra", "intra"},   {"inter", "inter"},
        {"inter", "intra"},       {"intra", "inter"},
    };
    table << "# variant sct_idf1 mct_idf1 (median over " << seeds
          << " seeds)\n";
    for (const auto& [sct_kind, mct_kind] : variants) {
      const std::string name = sct_kind == "baseline" && mct_kind == "baseline"
                                   ? "baseline"
                                   : sct_kind + "/" + mct_kind;
      const VariantScores v = evaluate_variant(sct_kind, mct_kind);
      if (v.available) {
        std::snprintf(line, sizeof(line), "%-14s %.6f %.6f\n", name.c_str(),
                      v.sct_idf1, v.mct_idf1);
        table << line;
      } else {
        std::snprintf(line, sizeof(line), "%-14s n/a n/a\n", name.c_str());
        table << line;
      }
    }
  } else {
    // Sweep one sampling window; the other keeps its configured value. Every
    // grid point retrains the swept metric and runs the intra/inter variant.
    table << "# sweep " << args.sweep << " window sct_idf1 mct_idf1 (median over "
          << seeds << " seeds)\n";
    const VariantScores reference = evaluate_variant("global", "global");
    if (reference.available) {
      std::snprintf(line, sizeof(line), "reference global %.6f %.6f\n",
                    reference.sct_idf1, reference.mct_idf1);
      table << line;
    } else {
      table << "reference global n/a n/a\n";
    }

    for (int window : grid) {
      std::vector<double> sct_scores, mct_scores;
      bool available = true;
      for (int s = 0; s < seeds && available; ++s) {
        SeedProducts& p = per_seed[static_cast<std::size_t>(s)];
        const std::uint64_t seed =
            base_sampler.seed + static_cast<std::uint64_t>(s);
        SamplerConfig sampler = base_sampler;
        sampler.seed = seed;
        if (args.sweep == "tau_s") {
          sampler.tau_s = window;
        } else {
          sampler.tau_m = window;
        }
        const std::vector<Tracklet> train_tracklets = ground_truth_tracklets(
            frames_below(scenario.detections, split), pipe.tracklet_len);
        try {
          std::optional<MetricNetwork> swept_intra = *p.intra;
          std::optional<MetricNetwork> swept_inter;
          if (args.sweep == "tau_s") {
            swept_intra = train_one(sample_intra(train_tracklets, sampler), seed);
            if (!p.inter) {
              available = false;
              break;
            }
            swept_inter = *p.inter;
          } else {
            swept_inter = train_one(
                sample_inter(train_tracklets, scenario.topology, sampler),
                seed);
          }
          const TrackingResult result = run_from_tracklets(
              p.tracklets, scenario.topology, make_metric_scorer(*swept_intra),
              make_metric_scorer(*swept_inter), pipe);
          sct_scores.push_back(
              id_measures_per_camera(truth, sct_records(result), radius).idf1);
          mct_scores.push_back(
              id_measures(truth, mct_records(result), radius).idf1);
        } catch (const std::exception&) {
          available = false;
        }
      }
      if (available) {
        std::snprintf(line, sizeof(line), "%s %d %.6f %.6f\n",
                      args.sweep.c_str(), window, median(sct_scores),
                      median(mct_scores));
        table << line;
      } else {
        std::snprintf(line, sizeof(line), "%s %d n/a n/a\n", args.sweep.c_str(),
                      window);
        table << line;
      }
    }
  }

  std::cout << table.str();
  if (!args.out_path.empty()) {
    std::ofstream os(args.out_path);
    if (!os) {
      throw std::runtime_error("cannot open " + args.out_path);
    }
    os << table.str();
  }
  return 0;
}

}  // namespace mtmct::cli
