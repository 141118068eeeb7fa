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

#include "mecc/instance.h"

#include <algorithm>
#include <stdexcept>

namespace mecc {

const char* ToString(Baseline baseline) {
  switch (baseline) {
    case Baseline::kFullMecc:
      return "full-mecc";
    case Baseline::kCacheOnly:
      return "cache-only";
    case Baseline::kNoMecc:
      return "no-mecc";
  }
  return "unknown";
}

Baseline ParseBaseline(const std::string& name) {
  if (name == "full-mecc") return Baseline::kFullMecc;
  if (name == "cache-only") return Baseline::kCacheOnly;
  if (name == "no-mecc") return Baseline::kNoMecc;
  throw std::invalid_argument("unknown baseline '" + name + "'");
}

InstanceConfig ApplyBaseline(InstanceConfig config, Baseline baseline) {
  ContentConfig& c = config.content;
  if (baseline == Baseline::kCacheOnly || baseline == Baseline::kNoMecc) {
    c.gw_compute_mbps = 0.0;
    c.mbs_compute_mbps = 0.0;
    c.sbs_compute_mbps = 0.0;
  }
  if (baseline == Baseline::kNoMecc) {
    c.gw_cache_files = 0;
    c.mbs_cache_files = 0;
    c.sbs_cache_files = 0;
  }
  return config;
}

std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void Instance::Finalize() {
  if (level_rate.empty() || level_rate.size() != level_score.size()) {
    throw std::invalid_argument("instance ladder is empty or inconsistent");
  }
  if (hits.users() != num_users || hits.nodes() != num_nodes + 1) {
    throw std::invalid_argument("hit matrix shape does not match instance");
  }
  if (static_cast<int>(compute_capacity.size()) != num_nodes ||
      static_cast<int>(task_cost.size()) != num_users) {
    throw std::invalid_argument("compute model shape does not match instance");
  }
  for (int i = 0; i < num_users; ++i) {
    if (!hits.hit(i, origin())) {
      throw std::invalid_argument("the origin must hit every request");
    }
  }
  paths_of_user_.assign(num_users, {});
  paths_of_pair_.assign(static_cast<std::size_t>(num_users) * (num_nodes + 1),
                        {});
  for (std::size_t p = 0; p < paths.size(); ++p) {
    const RoutedPath& path = paths[p];
    if (path.user < 0 || path.user >= num_users || path.source < 0 ||
        path.source > num_nodes) {
      throw std::invalid_argument("path references an unknown user or node");
    }
    if (path.wireless < 0 ||
        path.wireless >= static_cast<int>(efficiency.size())) {
      throw std::invalid_argument("path has no valid wireless hop");
    }
    for (int l : path.wired) {
      if (l < 0 || l >= static_cast<int>(wired_capacity.size())) {
        throw std::invalid_argument("path references an unknown wired link");
      }
    }
    paths_of_user_[path.user].push_back(static_cast<int>(p));
    paths_of_pair_[path.user * (num_nodes + 1) + path.source].push_back(
        static_cast<int>(p));
  }
}

Instance MakeEmptyInstance(std::vector<double> rates_mbps,
                           std::vector<double> scores, int users, int nodes) {
  Instance instance;
  instance.level_rate = std::move(rates_mbps);
  instance.level_score = std::move(scores);
  instance.num_users = users;
  instance.num_nodes = nodes;
  instance.hits = HitMatrix(users, nodes + 1, instance.level_rate);
  for (int i = 0; i < users; ++i) instance.hits.set(i, nodes, HitStatus::kHit);
  instance.compute_capacity.assign(nodes, 0.0);
  instance.task_cost.assign(users, 0.0);
  return instance;
}

Instance BuildInstance(const InstanceConfig& config) {
  const ScenarioConfig& sc = config.scenario;
  const ContentConfig& cc = config.content;
  cc.library.ladder.Validate();

  Instance instance;
  instance.topology = BuildHetnet(sc, sc.seed);
  const Topology& topo = instance.topology;
  ValidateTopology(topo, sc.area_m);

  const std::vector<double> pmf =
      ZipfPmf(cc.library.file_count, cc.library.zipf_exponent);
  instance.user_nodes = topo.NodesOfKind(NodeKind::kUser);
  instance.num_users = static_cast<int>(instance.user_nodes.size());
  instance.requests =
      SampleRequests(pmf, instance.num_users, DeriveSeed(sc.seed, 1));

  CacheState caches;
  for (const NodeSpec& node : topo.nodes) {
    int capacity = 0;
    double compute = 0.0;
    switch (node.kind) {
      case NodeKind::kGateway:
        capacity = cc.gw_cache_files;
        compute = cc.gw_compute_mbps;
        break;
      case NodeKind::kMacroBs:
        capacity = cc.mbs_cache_files;
        compute = cc.mbs_compute_mbps;
        break;
      case NodeKind::kSmallBs:
        capacity = cc.sbs_cache_files;
        compute = cc.sbs_compute_mbps;
        break;
      default:
        continue;
    }
    if (capacity < 0 || compute < 0.0) {
      throw std::invalid_argument("cache and compute capacities must be >= 0");
    }
    instance.edge_nodes.push_back(node.id);
    instance.edge_kinds.push_back(node.kind);
    instance.compute_capacity.push_back(compute);
    caches.nodes.push_back(
        {node.id, capacity, false, LfuPlace(cc.library, capacity)});
  }
  instance.num_nodes = static_cast<int>(instance.edge_nodes.size());
  caches.nodes.push_back({topo.Origin(), cc.library.file_count, true, {}});

  for (const QualityLevel& level : cc.library.ladder.levels) {
    instance.level_rate.push_back(level.rate_bps / 1e6);
    instance.level_score.push_back(level.score);
  }
  QualityLadder ladder_mbps = cc.library.ladder;
  for (QualityLevel& level : ladder_mbps.levels) level.rate_bps /= 1e6;
  instance.hits = BuildHitMatrix(instance.requests, caches, ladder_mbps);
  if (!(cc.task_cost_mbps > 0.0)) {
    throw std::invalid_argument("task cost must be positive");
  }
  instance.task_cost.assign(instance.num_users, cc.task_cost_mbps);

  std::vector<int> wired_index(topo.links.size(), -1);
  std::vector<int> wireless_index(topo.links.size(), -1);
  for (const LinkSpec& link : topo.links) {
    if (link.kind == LinkKind::kWired) {
      wired_index[link.id] = static_cast<int>(instance.wired_capacity.size());
      instance.wired_capacity.push_back(link.wired_capacity_bps / 1e6);
      instance.wired_link_ids.push_back(link.id);
    } else {
      wireless_index[link.id] = static_cast<int>(instance.efficiency.size());
      instance.efficiency.push_back(link.spectral_efficiency);
      instance.wireless_link_ids.push_back(link.id);
    }
  }
  instance.bandwidth = topo.spectrum_bandwidth_hz / 1e6;

  std::vector<int> column_of_node(topo.nodes.size(), -1);
  for (int j = 0; j < instance.num_nodes; ++j) {
    column_of_node[instance.edge_nodes[j]] = j;
  }
  column_of_node[topo.Origin()] = instance.origin();

  for (int i = 0; i < instance.num_users; ++i) {
    std::vector<int> sources;
    for (int j = 0; j < instance.num_nodes; ++j) {
      if (instance.Hit(i, j)) sources.push_back(instance.edge_nodes[j]);
    }
    sources.push_back(topo.Origin());
    const PathEnumeration found =
        EnumeratePaths(topo, instance.user_nodes[i], sources, sc.k_max);
    for (const CandidatePath& cp : found.paths) {
      RoutedPath path;
      path.user = i;
      path.source = column_of_node[cp.source_node];
      path.k = cp.index;
      for (int link_id : cp.link_sequence) {
        if (topo.links[link_id].kind == LinkKind::kWired) {
          path.wired.push_back(wired_index[link_id]);
        } else {
          path.wireless = wireless_index[link_id];
        }
      }
      instance.paths.push_back(std::move(path));
    }
  }
  instance.Finalize();
  return instance;
}

}  // namespace mecc
