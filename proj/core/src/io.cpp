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

#include "mtmct/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "wire.hpp"

namespace mtmct::io {

namespace {

constexpr char kFeatureMagic[9] = "MTMCFEAT";
constexpr std::uint32_t kFeatureVersion = 1;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) {
    return "";
  }
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

int parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) {
      throw std::invalid_argument(s);
    }
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("cannot parse integer '" + s + "' in " + what);
  }
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) {
      throw std::invalid_argument(s);
    }
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("cannot parse number '" + s + "' in " + what);
  }
}

std::ofstream open_out(const std::filesystem::path& path, bool binary) {
  std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
  if (!os) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  return os;
}

std::ifstream open_in(const std::filesystem::path& path, bool binary) {
  std::ifstream is(path, binary ? std::ios::binary : std::ios::in);
  if (!is) {
    throw std::runtime_error("cannot open " + path.string());
  }
  return is;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// KeyValueConfig
// ---------------------------------------------------------------------------

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream is = open_in(path, false);
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse(ss.str());
}

KeyValueConfig KeyValueConfig::parse(const std::string& text) {
  KeyValueConfig kv;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": empty key");
    }
    kv.values_[key] = value;
  }
  return kv;
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key,
                                  double fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback
                             : parse_double(it->second, "config key " + key);
}

int KeyValueConfig::get_int(const std::string& key, int fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback
                             : parse_int(it->second, "config key " + key);
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key,
                                      std::uint64_t fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) {
    return fallback;
  }
  try {
    return std::stoull(it->second);
  } catch (const std::exception&) {
    throw std::runtime_error("cannot parse integer '" + it->second +
                             "' in config key " + key);
  }
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) {
    return fallback;
  }
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "yes" || v == "on") {
    return true;
  }
  if (v == "false" || v == "0" || v == "no" || v == "off") {
    return false;
  }
  throw std::runtime_error("cannot parse boolean '" + v + "' in config key " +
                           key);
}

void KeyValueConfig::save(const std::filesystem::path& path) const {
  std::ofstream os = open_out(path, false);
  for (const auto& [key, value] : values_) {
    os << key << " = " << value << "\n";
  }
}

// ---------------------------------------------------------------------------
// Record files
// ---------------------------------------------------------------------------

void write_record_file(const std::filesystem::path& path,
                       std::span<const RecordRow> rows) {
  std::ofstream os = open_out(path, false);
  os << "# camera,frame,identity,x,y,feature_row\n";
  for (const RecordRow& r : rows) {
    os << r.camera << ',' << r.frame << ',';
    if (r.identity) {
      os << *r.identity;
    }
    os << ',' << format_double(r.center.x()) << ','
       << format_double(r.center.y()) << ',' << r.feature_row << '\n';
  }
  if (!os) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

std::vector<RecordRow> read_record_file(const std::filesystem::path& path) {
  std::ifstream is = open_in(path, false);
  std::vector<RecordRow> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    line = trim(line);
    if (line.empty() || line[0] == '#') {
      continue;
    }
    const std::vector<std::string> parts = split(line, ',');
    if (parts.size() != 6) {
      throw std::runtime_error("malformed record at " + where +
                               ": expected 6 fields");
    }
    RecordRow r;
    r.camera = parse_int(parts[0], where);
    r.frame = parse_int(parts[1], where);
    if (!trim(parts[2]).empty()) {
      r.identity = parse_int(parts[2], where);
    }
    r.center.x() = parse_double(parts[3], where);
    r.center.y() = parse_double(parts[4], where);
    r.feature_row = parse_int(parts[5], where);
    rows.push_back(r);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Feature container
// ---------------------------------------------------------------------------

void write_feature_container(const std::filesystem::path& path,
                             std::span<const FeatureVector> rows, int dim) {
  std::ofstream os = open_out(path, true);
  wire::write_magic(os, kFeatureMagic);
  wire::write_u32(os, kFeatureVersion);
  wire::write_u32(os, static_cast<std::uint32_t>(dim));
  wire::write_u64(os, rows.size());
  for (const FeatureVector& row : rows) {
    if (row.size() != dim) {
      throw std::invalid_argument("feature dimension mismatch in container");
    }
    for (Eigen::Index k = 0; k < row.size(); ++k) {
      wire::write_f64(os, row(k));
    }
  }
  if (!os) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

std::vector<FeatureVector> read_feature_container(
    const std::filesystem::path& path) {
  std::ifstream is = open_in(path, true);
  wire::expect_magic(is, kFeatureMagic, path.string());
  const std::uint32_t version = wire::read_u32(is);
  if (version != kFeatureVersion) {
    throw std::runtime_error("unsupported feature container version " +
                             std::to_string(version));
  }
  const std::uint32_t dim = wire::read_u32(is);
  const std::uint64_t count = wire::read_u64(is);
  std::vector<FeatureVector> rows;
  rows.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    FeatureVector row(dim);
    for (std::uint32_t k = 0; k < dim; ++k) {
      row(k) = wire::read_f64(is);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_pair_samples(const std::filesystem::path& path,
                        std::span<const PairSample> samples, int dim) {
  std::vector<FeatureVector> rows;
  rows.reserve(samples.size());
  for (const PairSample& s : samples) {
    if (s.diff.size() != dim) {
      throw std::invalid_argument("pair sample dimension mismatch");
    }
    FeatureVector row(dim + 1);
    row.head(dim) = s.diff;
    row(dim) = s.positive ? 1.0 : 0.0;
    rows.push_back(std::move(row));
  }
  write_feature_container(path, rows, dim + 1);
}

std::vector<PairSample> read_pair_samples(const std::filesystem::path& path) {
  const std::vector<FeatureVector> rows = read_feature_container(path);
  std::vector<PairSample> samples;
  samples.reserve(rows.size());
  for (const FeatureVector& row : rows) {
    if (row.size() < 2) {
      throw std::runtime_error("pair dataset rows too short in " +
                               path.string());
    }
    PairSample s;
    s.diff = row.head(row.size() - 1);
    s.positive = row(row.size() - 1) != 0.0;
    samples.push_back(std::move(s));
  }
  return samples;
}

// ---------------------------------------------------------------------------
// Topology
// ---------------------------------------------------------------------------

void write_topology(const std::filesystem::path& path,
                    const CameraTopology& topology) {
  std::ofstream os = open_out(path, false);
  os << "# camera <id> | edge <a> <b> <mean> <spread>\n";
  for (int cam : topology.camera_ids()) {
    os << "camera " << cam << "\n";
  }
  for (const auto& [edge, t] : topology.edges()) {
    os << "edge " << edge.first << ' ' << edge.second << ' '
       << format_double(t.mean) << ' ' << format_double(t.spread) << "\n";
  }
  if (!os) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

CameraTopology read_topology(const std::filesystem::path& path) {
  std::ifstream is = open_in(path, false);
  CameraTopology topo;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    line = trim(line);
    if (line.empty() || line[0] == '#') {
      continue;
    }
    std::istringstream ss(line);
    std::string kind;
    ss >> kind;
    if (kind == "camera") {
      int cam = 0;
      if (!(ss >> cam)) {
        throw std::runtime_error("malformed camera line at " + where);
      }
      topo.add_camera(cam);
    } else if (kind == "edge") {
      int a = 0, b = 0;
      double mean = 0.0, spread = 0.0;
      if (!(ss >> a >> b >> mean >> spread)) {
        throw std::runtime_error("malformed edge line at " + where);
      }
      topo.add_edge(a, b, TransitionTime{mean, spread});
    } else {
      throw std::runtime_error("unknown directive '" + kind + "' at " + where);
    }
  }
  return topo;
}

// ---------------------------------------------------------------------------
// Scenario directory
// ---------------------------------------------------------------------------

namespace {

void put_sim_config(KeyValueConfig& kv, const SimConfig& cfg) {
  auto topo_name = [](TopologyKind k) {
    switch (k) {
      case TopologyKind::kChain:
        return "chain";
      case TopologyKind::kRing:
        return "ring";
      case TopologyKind::kCustom:
        return "custom";
    }
    return "chain";
  };
  kv.set("sim.topology", topo_name(cfg.topology));
  kv.set("sim.cameras", std::to_string(cfg.cameras));
  if (!cfg.custom_edges.empty()) {
    std::string edges;
    for (std::size_t i = 0; i < cfg.custom_edges.size(); ++i) {
      if (i) {
        edges += ',';
      }
      edges += std::to_string(cfg.custom_edges[i].first) + "-" +
               std::to_string(cfg.custom_edges[i].second);
    }
    kv.set("sim.edges", edges);
  }
  kv.set("sim.identities", std::to_string(cfg.identities));
  kv.set("sim.duration", std::to_string(cfg.duration));
  kv.set("sim.feature_dim", std::to_string(cfg.feature_dim));
  kv.set("sim.identity_spread", format_double(cfg.identity_spread));
  kv.set("sim.camera_perturb", format_double(cfg.camera_perturb));
  kv.set("sim.temporal_drift", format_double(cfg.temporal_drift));
  kv.set("sim.feature_noise", format_double(cfg.feature_noise));
  kv.set("sim.detection_noise", format_double(cfg.detection_noise));
  kv.set("sim.dwell_mean", format_double(cfg.dwell_mean));
  kv.set("sim.dwell_spread", format_double(cfg.dwell_spread));
  kv.set("sim.transition_mean", format_double(cfg.transition_mean));
  kv.set("sim.transition_spread", format_double(cfg.transition_spread));
  kv.set("sim.miss_rate", format_double(cfg.miss_rate));
  kv.set("sim.frame_rate",
         cfg.frame_rate_mode == FrameRateMode::kSparse ? "sparse" : "normal");
  kv.set("sim.open_topology", cfg.open_topology ? "true" : "false");
  kv.set("sim.seed", std::to_string(cfg.seed));
}

}  // namespace

SimConfig sim_config_from(const KeyValueConfig& kv) {
  SimConfig cfg;
  const std::string topo = kv.get_string("sim.topology", "chain");
  if (topo == "chain") {
    cfg.topology = TopologyKind::kChain;
  } else if (topo == "ring") {
    cfg.topology = TopologyKind::kRing;
  } else if (topo == "custom") {
    cfg.topology = TopologyKind::kCustom;
  } else {
    throw std::runtime_error("unknown sim.topology '" + topo + "'");
  }
  cfg.cameras = kv.get_int("sim.cameras", cfg.cameras);
  if (kv.has("sim.edges")) {
    cfg.custom_edges.clear();
    for (const std::string& token :
         split(kv.get_string("sim.edges", ""), ',')) {
      const std::vector<std::string> ends = split(trim(token), '-');
      if (ends.size() != 2) {
        throw std::runtime_error("malformed sim.edges entry '" + token + "'");
      }
      cfg.custom_edges.emplace_back(parse_int(trim(ends[0]), "sim.edges"),
                                    parse_int(trim(ends[1]), "sim.edges"));
    }
  }
  cfg.identities = kv.get_int("sim.identities", cfg.identities);
  cfg.duration = kv.get_int("sim.duration", cfg.duration);
  cfg.feature_dim = kv.get_int("sim.feature_dim", cfg.feature_dim);
  cfg.identity_spread = kv.get_double("sim.identity_spread", cfg.identity_spread);
  cfg.camera_perturb = kv.get_double("sim.camera_perturb", cfg.camera_perturb);
  cfg.temporal_drift = kv.get_double("sim.temporal_drift", cfg.temporal_drift);
  cfg.feature_noise = kv.get_double("sim.feature_noise", cfg.feature_noise);
  cfg.detection_noise = kv.get_double("sim.detection_noise", cfg.detection_noise);
  cfg.dwell_mean = kv.get_double("sim.dwell_mean", cfg.dwell_mean);
  cfg.dwell_spread = kv.get_double("sim.dwell_spread", cfg.dwell_spread);
  cfg.transition_mean = kv.get_double("sim.transition_mean", cfg.transition_mean);
  cfg.transition_spread =
      kv.get_double("sim.transition_spread", cfg.transition_spread);
  cfg.miss_rate = kv.get_double("sim.miss_rate", cfg.miss_rate);
  const std::string rate = kv.get_string("sim.frame_rate", "normal");
  if (rate == "normal") {
    cfg.frame_rate_mode = FrameRateMode::kNormal;
  } else if (rate == "sparse") {
    cfg.frame_rate_mode = FrameRateMode::kSparse;
  } else {
    throw std::runtime_error("unknown sim.frame_rate '" + rate + "'");
  }
  cfg.open_topology = kv.get_bool("sim.open_topology", cfg.open_topology);
  cfg.seed = kv.get_u64("sim.seed", cfg.seed);
  return cfg;
}

SamplerConfig sampler_config_from(const KeyValueConfig& kv) {
  SamplerConfig cfg;
  cfg.tau_s = kv.get_int("sampler.tau_s", cfg.tau_s);
  cfg.tau_m = kv.get_int("sampler.tau_m", cfg.tau_m);
  cfg.pairs_requested = kv.get_int("sampler.pairs", 4096);
  cfg.seed = kv.get_u64("sampler.seed", cfg.seed);
  cfg.strict_neighbors =
      kv.get_bool("sampler.strict_neighbors", cfg.strict_neighbors);
  return cfg;
}

TrainConfig train_config_from(const KeyValueConfig& kv) {
  TrainConfig cfg;
  cfg.lr_initial = kv.get_double("train.lr", cfg.lr_initial);
  cfg.epochs_initial = kv.get_int("train.epochs_initial", cfg.epochs_initial);
  cfg.lr_decay_factor = kv.get_double("train.lr_decay", cfg.lr_decay_factor);
  cfg.epochs_decay = kv.get_int("train.epochs_decay", cfg.epochs_decay);
  cfg.batch_size = kv.get_int("train.batch", cfg.batch_size);
  cfg.seed = kv.get_u64("train.seed", cfg.seed);
  return cfg;
}

PipelineConfig pipeline_config_from(const KeyValueConfig& kv) {
  PipelineConfig cfg;
  cfg.tracklet_len = kv.get_int("pipeline.tracklet_len", cfg.tracklet_len);
  cfg.sct_window = kv.get_int("pipeline.sct_window", cfg.sct_window);
  cfg.mct_window = kv.get_int("pipeline.mct_window", cfg.mct_window);
  cfg.window_stride_fraction =
      kv.get_double("pipeline.stride_fraction", cfg.window_stride_fraction);
  cfg.motion_gate = kv.get_double("pipeline.motion_gate", cfg.motion_gate);
  cfg.transition_slack =
      kv.get_double("pipeline.transition_slack", cfg.transition_slack);
  return cfg;
}

void save_scenario(const std::filesystem::path& dir, const Scenario& scenario) {
  std::filesystem::create_directories(dir);

  std::vector<RecordRow> det_rows;
  std::vector<FeatureVector> features;
  det_rows.reserve(scenario.detections.size());
  features.reserve(scenario.detections.size());
  for (const Detection& d : scenario.detections) {
    RecordRow r;
    r.camera = d.camera_id;
    r.frame = d.frame;
    r.identity = d.identity;
    r.center = d.center;
    r.feature_row = static_cast<int>(features.size());
    det_rows.push_back(r);
    features.push_back(d.feature);
  }
  write_record_file(dir / "detections.txt", det_rows);
  write_feature_container(dir / "features.bin", features,
                          scenario.feature_dim());

  std::vector<RecordRow> truth_rows;
  truth_rows.reserve(scenario.truth.size());
  for (std::size_t i = 0; i < scenario.truth.size(); ++i) {
    const ObservationRecord& o = scenario.truth[i];
    RecordRow r;
    r.camera = o.camera_id;
    r.frame = o.frame;
    r.identity = o.id;
    r.center = o.center;
    r.feature_row = static_cast<int>(i) < static_cast<int>(features.size())
                        ? static_cast<int>(i)
                        : -1;
    truth_rows.push_back(r);
  }
  write_record_file(dir / "truth.txt", truth_rows);
  write_topology(dir / "topology.txt", scenario.topology);

  KeyValueConfig meta;
  put_sim_config(meta, scenario.config);
  meta.set("meta.detections", std::to_string(scenario.detections.size()));
  meta.set("meta.match_radius", format_double(scenario.match_radius()));
  meta.save(dir / "meta.txt");
}

Scenario load_scenario(const std::filesystem::path& dir) {
  Scenario scenario;
  const KeyValueConfig meta = KeyValueConfig::load(dir / "meta.txt");
  scenario.config = sim_config_from(meta);
  scenario.topology = read_topology(dir / "topology.txt");

  const std::vector<RecordRow> det_rows =
      read_record_file(dir / "detections.txt");
  const std::vector<FeatureVector> features =
      read_feature_container(dir / "features.bin");
  scenario.detections.reserve(det_rows.size());
  for (const RecordRow& r : det_rows) {
    Detection d;
    d.camera_id = r.camera;
    d.frame = r.frame;
    d.identity = r.identity;
    d.center = r.center;
    d.feature_row = r.feature_row;
    if (r.feature_row < 0 ||
        static_cast<std::size_t>(r.feature_row) >= features.size()) {
      throw std::runtime_error("feature_row out of range in " +
                               (dir / "detections.txt").string());
    }
    d.feature = features[static_cast<std::size_t>(r.feature_row)];
    scenario.detections.push_back(std::move(d));
  }

  const std::vector<RecordRow> truth_rows = read_record_file(dir / "truth.txt");
  scenario.truth.reserve(truth_rows.size());
  for (const RecordRow& r : truth_rows) {
    if (!r.identity) {
      throw std::runtime_error("truth record without identity in " +
                               (dir / "truth.txt").string());
    }
    scenario.truth.push_back(
        ObservationRecord{r.camera, r.frame, *r.identity, r.center});
  }
  return scenario;
}

void write_score_report(
    const std::filesystem::path& path,
    const std::vector<std::pair<std::string, std::string>>& entries) {
  KeyValueConfig kv;
  for (const auto& [key, value] : entries) {
    kv.set(key, value);
  }
  kv.save(path);
}

}  // namespace mtmct::io
