// Copyright 2026 The MECC Authors
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

#include "mecc/harness.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mecc {

namespace {

constexpr const char* kMetricsSchema = "mecc.metrics/1";

void RejectUnknown(const Json& doc, const std::string& where,
                   std::initializer_list<const char*> allowed) {
  if (!doc.is_object()) {
    throw std::invalid_argument(where + " must be a JSON object");
  }
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& item : doc.items()) {
    if (!keys.count(item.key())) {
      throw std::invalid_argument("unknown key '" + item.key() + "' in " +
                                  where);
    }
  }
}

template <typename T>
void Read(const Json& doc, const char* key, T& out) {
  if (!doc.contains(key)) return;
  try {
    out = doc.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad value for '") + key +
                                "': " + e.what());
  }
}

std::string Number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.10g", value);
  return buffer;
}

Json FiniteOrNull(double value) {
  return std::isfinite(value) ? Json(value) : Json(nullptr);
}

std::string CsvField(const std::string& text) {
  if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

}  // namespace

InstanceConfig ConfigFromJson(const Json& doc) {
  RejectUnknown(doc, "scenario",
                {"area_m", "counts", "power_dbm", "noise_dbm_hz",
                 "bandwidth_hz", "backhaul_mbps", "shadowing_db", "attach_m",
                 "k_max", "seed", "library", "ladder", "cache_files",
                 "compute_mbps", "hd_level"});
  InstanceConfig config;
  ScenarioConfig& sc = config.scenario;
  ContentConfig& cc = config.content;
  Read(doc, "area_m", sc.area_m);
  if (doc.contains("counts")) {
    const Json& c = doc["counts"];
    RejectUnknown(c, "counts", {"gw", "mbs", "sbs", "users"});
    Read(c, "gw", sc.gateways);
    Read(c, "mbs", sc.macro_bs);
    Read(c, "sbs", sc.small_bs);
    Read(c, "users", sc.users);
  }
  if (doc.contains("power_dbm")) {
    const Json& p = doc["power_dbm"];
    RejectUnknown(p, "power_dbm", {"mbs", "sbs"});
    Read(p, "mbs", sc.mbs_power_dbm);
    Read(p, "sbs", sc.sbs_power_dbm);
  }
  Read(doc, "noise_dbm_hz", sc.noise_dbm_hz);
  Read(doc, "bandwidth_hz", sc.bandwidth_hz);
  if (doc.contains("backhaul_mbps")) {
    const Json& b = doc["backhaul_mbps"];
    RejectUnknown(b, "backhaul_mbps", {"mbs_gw", "sbs_mbs", "origin_gw"});
    Read(b, "mbs_gw", sc.mbs_gw_mbps);
    Read(b, "sbs_mbs", sc.sbs_mbs_mbps);
    Read(b, "origin_gw", sc.origin_gw_mbps);
  }
  Read(doc, "shadowing_db", sc.shadowing_db);
  Read(doc, "attach_m", sc.attach_m);
  Read(doc, "k_max", sc.k_max);
  Read(doc, "seed", sc.seed);
  if (doc.contains("library")) {
    const Json& l = doc["library"];
    RejectUnknown(l, "library", {"files", "zipf", "duration_s"});
    Read(l, "files", cc.library.file_count);
    Read(l, "zipf", cc.library.zipf_exponent);
    Read(l, "duration_s", cc.library.duration_s);
  }
  if (doc.contains("ladder")) {
    const Json& ladder = doc["ladder"];
    if (!ladder.is_array()) throw std::invalid_argument("ladder must be an array");
    cc.library.ladder.levels.clear();
    for (const Json& level : ladder) {
      RejectUnknown(level, "ladder level", {"q", "v_mbps", "score"});
      QualityLevel ql;
      double v_mbps = 0.0;
      Read(level, "q", ql.q);
      Read(level, "v_mbps", v_mbps);
      Read(level, "score", ql.score);
      ql.rate_bps = v_mbps * 1e6;
      cc.library.ladder.levels.push_back(ql);
    }
  }
  if (doc.contains("cache_files")) {
    const Json& c = doc["cache_files"];
    RejectUnknown(c, "cache_files", {"gw", "mbs", "sbs"});
    Read(c, "gw", cc.gw_cache_files);
    Read(c, "mbs", cc.mbs_cache_files);
    Read(c, "sbs", cc.sbs_cache_files);
  }
  if (doc.contains("compute_mbps")) {
    const Json& c = doc["compute_mbps"];
    RejectUnknown(c, "compute_mbps", {"gw", "mbs", "sbs", "task_cost"});
    Read(c, "gw", cc.gw_compute_mbps);
    Read(c, "mbs", cc.mbs_compute_mbps);
    Read(c, "sbs", cc.sbs_compute_mbps);
    Read(c, "task_cost", cc.task_cost_mbps);
  }
  Read(doc, "hd_level", config.hd_level);
  cc.library.ladder.Validate();
  if (config.hd_level < 1 ||
      config.hd_level > static_cast<int>(cc.library.ladder.size())) {
    throw std::invalid_argument("hd_level must name a ladder level");
  }
  return config;
}

Json ConfigToJson(const InstanceConfig& config) {
  const ScenarioConfig& sc = config.scenario;
  const ContentConfig& cc = config.content;
  Json ladder = Json::array();
  for (const QualityLevel& level : cc.library.ladder.levels) {
    ladder.push_back(
        {{"q", level.q}, {"v_mbps", level.rate_bps / 1e6}, {"score", level.score}});
  }
  return Json{
      {"area_m", sc.area_m},
      {"counts",
       {{"gw", sc.gateways}, {"mbs", sc.macro_bs}, {"sbs", sc.small_bs},
        {"users", sc.users}}},
      {"power_dbm", {{"mbs", sc.mbs_power_dbm}, {"sbs", sc.sbs_power_dbm}}},
      {"noise_dbm_hz", sc.noise_dbm_hz},
      {"bandwidth_hz", sc.bandwidth_hz},
      {"backhaul_mbps",
       {{"mbs_gw", sc.mbs_gw_mbps},
        {"sbs_mbs", sc.sbs_mbs_mbps},
        {"origin_gw", sc.origin_gw_mbps}}},
      {"shadowing_db", sc.shadowing_db},
      {"attach_m", sc.attach_m},
      {"k_max", sc.k_max},
      {"seed", sc.seed},
      {"library",
       {{"files", cc.library.file_count},
        {"zipf", cc.library.zipf_exponent},
        {"duration_s", cc.library.duration_s}}},
      {"ladder", ladder},
      {"cache_files",
       {{"gw", cc.gw_cache_files},
        {"mbs", cc.mbs_cache_files},
        {"sbs", cc.sbs_cache_files}}},
      {"compute_mbps",
       {{"gw", cc.gw_compute_mbps},
        {"mbs", cc.mbs_compute_mbps},
        {"sbs", cc.sbs_compute_mbps},
        {"task_cost", cc.task_cost_mbps}}},
      {"hd_level", config.hd_level},
  };
}

Json TopologyToJson(const Topology& topology) {
  Json nodes = Json::array();
  for (const NodeSpec& node : topology.nodes) {
    Json entry{{"id", node.id},
               {"kind", ToString(node.kind)},
               {"x_m", node.position.x},
               {"y_m", node.position.y}};
    if (node.IsBaseStation()) entry["tx_power_dbm"] = node.tx_power_dbm;
    nodes.push_back(std::move(entry));
  }
  Json links = Json::array();
  for (const LinkSpec& link : topology.links) {
    Json entry{{"id", link.id},
               {"kind", ToString(link.kind)},
               {"source", link.source},
               {"dest", link.dest}};
    if (link.kind == LinkKind::kWired) {
      entry["capacity_bps"] = link.wired_capacity_bps;
    } else {
      entry["channel_gain"] = link.channel_gain;
      entry["spectral_efficiency"] = link.spectral_efficiency;
    }
    links.push_back(std::move(entry));
  }
  return Json{{"seed", topology.rng_seed},
              {"bandwidth_hz", topology.spectrum_bandwidth_hz},
              {"noise_dbm_hz", topology.noise_psd_dbm_hz},
              {"nodes", std::move(nodes)},
              {"links", std::move(links)}};
}

InstanceConfig SmallInstanceConfig(std::uint64_t seed) {
  std::mt19937_64 rng(DeriveSeed(seed, 7));
  auto uniform_int = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  InstanceConfig config;
  ScenarioConfig& sc = config.scenario;
  sc.gateways = 1;
  sc.macro_bs = 1;
  sc.small_bs = 1;
  sc.users = uniform_int(1, 4);
  sc.mbs_gw_mbps = uniform_int(5, 30);
  sc.sbs_mbs_mbps = uniform_int(5, 30);
  sc.bandwidth_hz = uniform_int(1, 6) * 1e6;
  sc.attach_m = 2;
  sc.k_max = 2;
  sc.seed = seed;

  ContentConfig& cc = config.content;
  cc.library.file_count = 10;
  cc.library.zipf_exponent = 0.8;
  cc.library.ladder.levels = {{1, 2e6, 1.0}, {2, 5e6, 2.2}, {3, 10e6, 3.0}};
  cc.gw_cache_files = uniform_int(0, 3);
  cc.mbs_cache_files = uniform_int(0, 6);
  cc.sbs_cache_files = uniform_int(0, 6);
  cc.task_cost_mbps = 2.0;
  cc.gw_compute_mbps = uniform_int(0, 4);
  cc.mbs_compute_mbps = uniform_int(0, 6);
  cc.sbs_compute_mbps = uniform_int(0, 6);
  config.hd_level = 3;
  return config;
}

const char* ToString(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kNone:
      return "none";
    case SweepAxis::kComputeCapacity:
      return "compute_capacity";
    case SweepAxis::kCacheSize:
      return "cache_size";
    case SweepAxis::kUsers:
      return "users";
  }
  return "?";
}

SweepAxis ParseSweepAxis(const std::string& name) {
  for (SweepAxis axis : {SweepAxis::kNone, SweepAxis::kComputeCapacity,
                         SweepAxis::kCacheSize, SweepAxis::kUsers}) {
    if (name == ToString(axis)) return axis;
  }
  throw std::invalid_argument("unknown sweep axis '" + name + "'");
}

InstanceConfig ApplyAxis(InstanceConfig config, SweepAxis axis, double value) {
  ContentConfig& cc = config.content;
  switch (axis) {
    case SweepAxis::kNone:
      break;
    case SweepAxis::kComputeCapacity: {
      const double ratio = cc.mbs_compute_mbps > 0.0
                               ? cc.sbs_compute_mbps / cc.mbs_compute_mbps
                               : ContentConfig{}.sbs_compute_mbps /
                                     ContentConfig{}.mbs_compute_mbps;
      cc.mbs_compute_mbps = value;
      cc.sbs_compute_mbps = value * ratio;
      break;
    }
    case SweepAxis::kCacheSize:
      cc.mbs_cache_files = static_cast<int>(std::lround(value));
      cc.sbs_cache_files = static_cast<int>(std::lround(value * 0.5));
      break;
    case SweepAxis::kUsers:
      config.scenario.users = static_cast<int>(std::lround(value));
      break;
  }
  return config;
}

void ExperimentSpec::Validate() const {
  if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  if (!seeds.empty() && static_cast<int>(seeds.size()) != repetitions) {
    throw std::invalid_argument("give one seed per repetition");
  }
  if (baselines.empty()) throw std::invalid_argument("no baseline selected");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  if (axis != SweepAxis::kNone && values.empty()) {
    throw std::invalid_argument("sweep axis given without values");
  }
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("sweep values must be finite and >= 0");
    }
    if (axis == SweepAxis::kUsers && std::lround(v) < 1) {
      throw std::invalid_argument("user counts must be >= 1");
    }
  }
}

int ExperimentSpec::points() const {
  return axis == SweepAxis::kNone ? 1 : static_cast<int>(values.size());
}

std::uint64_t ExperimentSpec::SeedOf(int repetition) const {
  return seeds.empty() ? config.scenario.seed + repetition : seeds[repetition];
}

ExperimentSpec ExperimentFromJson(const Json& doc) {
  RejectUnknown(doc, "experiment",
                {"scenario", "axis", "values", "repetitions", "seeds",
                 "baselines", "solver", "threads"});
  ExperimentSpec spec;
  if (doc.contains("scenario")) spec.config = ConfigFromJson(doc["scenario"]);
  std::string axis = "none";
  Read(doc, "axis", axis);
  spec.axis = ParseSweepAxis(axis);
  Read(doc, "values", spec.values);
  Read(doc, "repetitions", spec.repetitions);
  Read(doc, "seeds", spec.seeds);
  if (doc.contains("baselines")) {
    std::vector<std::string> names;
    Read(doc, "baselines", names);
    spec.baselines.clear();
    for (const std::string& name : names) {
      spec.baselines.push_back(ParseBaseline(name));
    }
  }
  if (doc.contains("solver")) {
    const Json& s = doc["solver"];
    RejectUnknown(s, "solver",
                  {"max_iters", "tol", "mode", "step_a", "step_b", "patience",
                   "improve"});
    Read(s, "max_iters", spec.solver.max_iters);
    Read(s, "tol", spec.solver.tol);
    std::string mode = ToString(spec.solver.mode);
    Read(s, "mode", mode);
    spec.solver.mode = ParseRateMode(mode);
    Read(s, "step_a", spec.solver.schedule.a);
    Read(s, "step_b", spec.solver.schedule.b);
    Read(s, "patience", spec.solver.patience);
    Read(s, "improve", spec.solver.improve);
  }
  Read(doc, "threads", spec.threads);
  spec.Validate();
  return spec;
}

Json ExperimentToJson(const ExperimentSpec& spec) {
  Json baselines = Json::array();
  for (Baseline b : spec.baselines) baselines.push_back(ToString(b));
  return Json{{"scenario", ConfigToJson(spec.config)},
              {"axis", ToString(spec.axis)},
              {"values", spec.values},
              {"repetitions", spec.repetitions},
              {"seeds", spec.seeds},
              {"baselines", baselines},
              {"solver",
               {{"max_iters", spec.solver.max_iters},
                {"tol", spec.solver.tol},
                {"mode", ToString(spec.solver.mode)},
                {"step_a", spec.solver.schedule.a},
                {"step_b", spec.solver.schedule.b},
                {"patience", spec.solver.patience},
                {"improve", spec.solver.improve}}},
              {"threads", spec.threads}};
}

MetricsRecord Measure(const InstanceConfig& config, const RunOptions& solver,
                      int hd_level) {
  MetricsRecord record;
  record.seed = config.scenario.seed;
  record.users = config.scenario.users;
  const int levels = static_cast<int>(config.content.library.ladder.size());
  record.level_counts.assign(levels, 0);
  try {
    const Instance instance = BuildInstance(config);
    record.users = instance.num_users;

    auto class_rate = [&](NodeKind kind) {
      int hits = 0;
      bool present = false;
      for (int i = 0; i < instance.num_users; ++i) {
        bool any = false;
        for (int j = 0; j < instance.num_nodes; ++j) {
          if (instance.edge_kinds[j] != kind) continue;
          present = true;
          any = any || instance.Hit(i, j);
        }
        hits += any ? 1 : 0;
      }
      return present && instance.num_users > 0
                 ? static_cast<double>(hits) / instance.num_users
                 : 0.0;
    };
    record.hit_rate_gw = class_rate(NodeKind::kGateway);
    record.hit_rate_mbs = class_rate(NodeKind::kMacroBs);
    record.hit_rate_sbs = class_rate(NodeKind::kSmallBs);

    RunOptions options = solver;
    options.seed = config.scenario.seed;
    const RunResult result = Run(instance, options);
    record.iterations = result.iterations;
    record.gap = result.gap;
    record.converged = result.converged;
    record.error = result.error;
    record.feasible = result.has_primal;
    if (result.has_primal) {
      record.mean_utility = result.best.utility;
      record.level_counts = LevelCounts(result.best.x);
      record.served_users = instance.num_users;
      int hd = 0;
      for (int q = hd_level - 1; q < levels; ++q) hd += record.level_counts[q];
      record.hd_plus_ratio = instance.num_users > 0
                                 ? static_cast<double>(hd) / instance.num_users
                                 : 0.0;
    }
  } catch (const std::exception& e) {
    record.error = e.what();
  }
  return record;
}

std::vector<MetricsRecord> RunExperiment(const ExperimentSpec& spec) {
  spec.Validate();
  const int points = spec.points();
  const int reps = spec.repetitions;
  const int modes = static_cast<int>(spec.baselines.size());
  const int total = points * reps * modes;
  std::vector<MetricsRecord> records(total);

  auto task = [&](int index) {
    const int b = index % modes;
    const int r = (index / modes) % reps;
    const int p = index / (modes * reps);
    const double value = spec.axis == SweepAxis::kNone ? 0.0 : spec.values[p];
    InstanceConfig config = ApplyAxis(spec.config, spec.axis, value);
    config.scenario.seed = spec.SeedOf(r);
    config = ApplyBaseline(config, spec.baselines[b]);

    const auto start = std::chrono::steady_clock::now();
    MetricsRecord record = Measure(config, spec.solver, spec.config.hd_level);
    if (spec.record_wall_time) {
      record.timed = true;
      record.wall_time_s = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    }
    record.point = p;
    record.axis = spec.axis;
    record.axis_value = value;
    record.repetition = r;
    record.baseline = spec.baselines[b];
    records[index] = std::move(record);
  };

  const int workers = std::min(spec.threads, total);
  if (workers <= 1) {
    for (int k = 0; k < total; ++k) task(k);
    return records;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int k = next++; k < total; k = next++) task(k);
    });
  }
  for (std::thread& t : pool) t.join();
  return records;
}

EmitFormat ParseEmitFormat(const std::string& name) {
  if (name == "csv") return EmitFormat::kCsv;
  if (name == "json") return EmitFormat::kJson;
  throw std::invalid_argument("unknown output format '" + name + "'");
}

std::string MetricsCsv(const std::vector<MetricsRecord>& records) {
  std::size_t levels = 0;
  bool timed = false;
  for (const MetricsRecord& r : records) {
    levels = std::max(levels, r.level_counts.size());
    timed = timed || r.timed;
  }
  std::ostringstream out;
  out << "point,axis,axis_value,repetition,seed,baseline,users,served_users,"
         "mean_utility,hd_plus_ratio";
  for (std::size_t q = 1; q <= levels; ++q) out << ",count_q" << q;
  out << ",hit_rate_gw,hit_rate_mbs,hit_rate_sbs,iterations,gap,converged,"
         "feasible,error";
  if (timed) out << ",wall_time_s";
  out << '\n';
  for (const MetricsRecord& r : records) {
    out << r.point << ',' << ToString(r.axis) << ',' << Number(r.axis_value)
        << ',' << r.repetition << ',' << r.seed << ',' << ToString(r.baseline)
        << ',' << r.users << ',' << r.served_users << ','
        << Number(r.mean_utility) << ',' << Number(r.hd_plus_ratio);
    for (std::size_t q = 0; q < levels; ++q) {
      out << ',' << (q < r.level_counts.size() ? r.level_counts[q] : 0);
    }
    out << ',' << Number(r.hit_rate_gw) << ',' << Number(r.hit_rate_mbs) << ','
        << Number(r.hit_rate_sbs) << ',' << r.iterations << ','
        << Number(r.gap) << ',' << (r.converged ? 1 : 0) << ','
        << (r.feasible ? 1 : 0) << ',' << CsvField(r.error);
    if (timed) out << ',' << Number(r.wall_time_s);
    out << '\n';
  }
  return out.str();
}

std::string MetricsJson(const std::vector<MetricsRecord>& records) {
  Json list = Json::array();
  for (const MetricsRecord& r : records) {
    Json entry{{"point", r.point},
               {"axis", ToString(r.axis)},
               {"axis_value", r.axis_value},
               {"repetition", r.repetition},
               {"seed", r.seed},
               {"baseline", ToString(r.baseline)},
               {"users", r.users},
               {"served_users", r.served_users},
               {"mean_utility", r.mean_utility},
               {"hd_plus_ratio", r.hd_plus_ratio},
               {"level_counts", r.level_counts},
               {"hit_rate",
                {{"gw", r.hit_rate_gw},
                 {"mbs", r.hit_rate_mbs},
                 {"sbs", r.hit_rate_sbs}}},
               {"iterations", r.iterations},
               {"gap", FiniteOrNull(r.gap)},
               {"converged", r.converged},
               {"feasible", r.feasible},
               {"error", r.error}};
    if (r.timed) entry["wall_time_s"] = r.wall_time_s;
    list.push_back(std::move(entry));
  }
  return Json{{"schema", kMetricsSchema}, {"records", std::move(list)}}.dump(2) +
         "\n";
}

void Emit(const std::vector<MetricsRecord>& records, EmitFormat format,
          const std::string& path) {
  if (records.empty()) throw std::invalid_argument("no metrics records to emit");
  const std::string body =
      format == EmitFormat::kCsv ? MetricsCsv(records) : MetricsJson(records);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << body;
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace mecc
