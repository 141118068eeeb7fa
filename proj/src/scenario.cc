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

#include "mecc/scenario.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <stdexcept>
#include <string>

namespace mecc {

namespace {

constexpr double kMinDistanceM = 1.0;

void AddWiredPair(Topology& topology, int a, int b, double capacity_bps) {
  for (auto [from, to] : {std::pair{a, b}, std::pair{b, a}}) {
    LinkSpec link;
    link.id = static_cast<int>(topology.links.size());
    link.source = from;
    link.dest = to;
    link.kind = LinkKind::kWired;
    link.wired_capacity_bps = capacity_bps;
    topology.links.push_back(link);
  }
}

int AddNode(Topology& topology, NodeKind kind, Position position,
            double power_dbm) {
  NodeSpec node;
  node.id = static_cast<int>(topology.nodes.size());
  node.kind = kind;
  node.position = position;
  node.tx_power_dbm = power_dbm;
  topology.nodes.push_back(node);
  return node.id;
}

// Depth-limited DFS that appends every simple path of exactly `depth` hops
// from `node` to `target`. Out-links are visited in ascending id order, so
// results come out in lexicographic link-id order.
void CollectPaths(const Topology& topology,
                  const std::vector<std::vector<int>>& out_links, int node,
                  int target, int depth, std::vector<char>& on_path,
                  std::vector<int>& links,
                  std::vector<std::vector<int>>& found) {
  if (depth == 0) {
    if (node == target) found.push_back(links);
    return;
  }
  for (int link_id : out_links[node]) {
    const LinkSpec& link = topology.links[link_id];
    if (on_path[link.dest]) continue;
    // A wireless hop must terminate the path at the target user.
    if (link.kind == LinkKind::kWireless &&
        (link.dest != target || depth != 1)) {
      continue;
    }
    on_path[link.dest] = 1;
    links.push_back(link_id);
    CollectPaths(topology, out_links, link.dest, target, depth - 1, on_path,
                 links, found);
    links.pop_back();
    on_path[link.dest] = 0;
  }
}

}  // namespace

const char* ToString(NodeKind kind) {
  switch (kind) {
    case NodeKind::kGateway:
      return "gateway";
    case NodeKind::kMacroBs:
      return "macro-bs";
    case NodeKind::kSmallBs:
      return "small-bs";
    case NodeKind::kUser:
      return "user";
    case NodeKind::kOrigin:
      return "origin";
  }
  return "unknown";
}

const char* ToString(LinkKind kind) {
  return kind == LinkKind::kWired ? "wired" : "wireless";
}

double Distance(const Position& a, const Position& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

int Topology::Origin() const {
  for (const NodeSpec& node : nodes) {
    if (node.kind == NodeKind::kOrigin) return node.id;
  }
  return -1;
}

std::vector<int> Topology::NodesOfKind(NodeKind kind) const {
  std::vector<int> ids;
  for (const NodeSpec& node : nodes) {
    if (node.kind == kind) ids.push_back(node.id);
  }
  return ids;
}

std::vector<int> Topology::OutLinks(int node) const {
  std::vector<int> ids;
  for (const LinkSpec& link : links) {
    if (link.source == node) ids.push_back(link.id);
  }
  return ids;
}

double PathlossDb(double distance_m) {
  if (!(distance_m >= kMinDistanceM)) {
    throw std::domain_error("pathloss model is undefined below 1 m, got " +
                            std::to_string(distance_m));
  }
  return 34.0 + 40.0 * std::log10(distance_m);
}

double SpectralEfficiency(double gain, double tx_psd_w_hz,
                          double noise_psd_w_hz) {
  if (gain < 0.0 || tx_psd_w_hz <= 0.0 || noise_psd_w_hz <= 0.0) {
    throw std::invalid_argument("spectral efficiency needs gain >= 0 and "
                                "positive power densities");
  }
  return std::log2(1.0 + gain * tx_psd_w_hz / noise_psd_w_hz);
}

double DbmToWatts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

Topology BuildHetnet(const ScenarioConfig& config, std::uint64_t seed) {
  if (config.gateways < 1 || config.macro_bs < 1 || config.small_bs < 0 ||
      config.users < 1) {
    throw std::invalid_argument(
        "scenario needs at least one gateway, one macro BS and one user");
  }
  if (!(config.area_m > 0.0) || !(config.bandwidth_hz > 0.0) ||
      config.attach_m < 1 || config.k_max < 1) {
    throw std::invalid_argument("scenario area, bandwidth, attach_m and k_max "
                                "must be positive");
  }
  if (!(config.mbs_gw_mbps > 0.0) || !(config.sbs_mbs_mbps > 0.0) ||
      !(config.origin_gw_mbps > 0.0) || config.shadowing_db < 0.0) {
    throw std::invalid_argument("backhaul capacities must be positive");
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, config.area_m);
  auto random_position = [&] { return Position{coord(rng), coord(rng)}; };
  const Position center{config.area_m / 2.0, config.area_m / 2.0};

  Topology topology;
  topology.spectrum_bandwidth_hz = config.bandwidth_hz;
  topology.noise_psd_dbm_hz = config.noise_dbm_hz;
  topology.rng_seed = seed;

  const int origin = AddNode(topology, NodeKind::kOrigin, center, 0.0);
  std::vector<int> gateways;
  for (int g = 0; g < config.gateways; ++g) {
    gateways.push_back(AddNode(topology, NodeKind::kGateway, center, 0.0));
  }
  std::vector<int> macros;
  for (int m = 0; m < config.macro_bs; ++m) {
    const Position p = m == 0 ? center : random_position();
    macros.push_back(
        AddNode(topology, NodeKind::kMacroBs, p, config.mbs_power_dbm));
  }
  std::vector<int> smalls;
  for (int s = 0; s < config.small_bs; ++s) {
    smalls.push_back(AddNode(topology, NodeKind::kSmallBs, random_position(),
                             config.sbs_power_dbm));
  }
  std::vector<int> users;
  for (int u = 0; u < config.users; ++u) {
    users.push_back(AddNode(topology, NodeKind::kUser, random_position(), 0.0));
  }

  for (int gw : gateways) {
    LinkSpec link;
    link.id = static_cast<int>(topology.links.size());
    link.source = origin;
    link.dest = gw;
    link.kind = LinkKind::kWired;
    link.wired_capacity_bps = config.origin_gw_mbps * 1e6;
    topology.links.push_back(link);
  }
  for (std::size_t m = 0; m < macros.size(); ++m) {
    AddWiredPair(topology, gateways[m % gateways.size()], macros[m],
                 config.mbs_gw_mbps * 1e6);
  }
  for (int sbs : smalls) {
    const Position& p = topology.nodes[sbs].position;
    int nearest = macros.front();
    for (int mbs : macros) {
      if (Distance(p, topology.nodes[mbs].position) <
          Distance(p, topology.nodes[nearest].position)) {
        nearest = mbs;
      }
    }
    AddWiredPair(topology, nearest, sbs, config.sbs_mbs_mbps * 1e6);
  }

  std::vector<int> stations = macros;
  stations.insert(stations.end(), smalls.begin(), smalls.end());
  std::normal_distribution<double> shadowing(0.0, 1.0);
  const double noise_psd = DbmToWatts(config.noise_dbm_hz);

  for (int user : users) {
    struct Candidate {
      int bs;
      double gain;
    };
    std::vector<Candidate> candidates;
    for (int bs : stations) {
      const double d =
          std::max(kMinDistanceM, Distance(topology.nodes[bs].position,
                                           topology.nodes[user].position));
      const double loss_db =
          PathlossDb(d) + config.shadowing_db * shadowing(rng);
      candidates.push_back({bs, std::pow(10.0, -loss_db / 10.0)});
    }
    if (candidates.empty()) {
      throw std::runtime_error("user " + std::to_string(user) +
                               " has no candidate base station");
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) {
                       return a.gain > b.gain;
                     });
    candidates.resize(std::min<std::size_t>(candidates.size(),
                                            static_cast<std::size_t>(
                                                config.attach_m)));
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) { return a.bs < b.bs; });
    for (const Candidate& c : candidates) {
      const double tx_psd =
          DbmToWatts(topology.nodes[c.bs].tx_power_dbm) / config.bandwidth_hz;
      LinkSpec link;
      link.id = static_cast<int>(topology.links.size());
      link.source = c.bs;
      link.dest = user;
      link.kind = LinkKind::kWireless;
      link.channel_gain = c.gain;
      link.spectral_efficiency = SpectralEfficiency(c.gain, tx_psd, noise_psd);
      topology.links.push_back(link);
    }
  }
  return topology;
}

void ValidateTopology(const Topology& topology, double area_m) {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("invalid topology: " + what);
  };
  if (!(topology.spectrum_bandwidth_hz > 0.0)) fail("bandwidth must be > 0");
  int origins = 0;
  for (std::size_t n = 0; n < topology.nodes.size(); ++n) {
    const NodeSpec& node = topology.nodes[n];
    if (node.id != static_cast<int>(n)) fail("node ids must be dense");
    if (node.position.x < 0.0 || node.position.x > area_m ||
        node.position.y < 0.0 || node.position.y > area_m) {
      fail("node " + std::to_string(node.id) + " lies outside the area");
    }
    if (node.kind == NodeKind::kOrigin) ++origins;
  }
  if (origins != 1) fail("exactly one origin node is required");
  const int origin = topology.Origin();
  bool origin_feeds_gateway = false;
  for (std::size_t l = 0; l < topology.links.size(); ++l) {
    const LinkSpec& link = topology.links[l];
    if (link.id != static_cast<int>(l)) fail("link ids must be dense");
    const NodeSpec& src = topology.nodes.at(link.source);
    const NodeSpec& dst = topology.nodes.at(link.dest);
    if (src.kind == NodeKind::kUser) fail("user nodes never transmit");
    if (link.kind == LinkKind::kWired) {
      if (!(link.wired_capacity_bps > 0.0)) fail("wired capacity must be > 0");
      if (link.source == origin && dst.kind == NodeKind::kGateway) {
        origin_feeds_gateway = true;
      }
    } else {
      if (dst.kind != NodeKind::kUser) fail("wireless links end at users");
      if (!(link.spectral_efficiency > 0.0)) {
        fail("wireless spectral efficiency must be > 0");
      }
    }
  }
  if (!origin_feeds_gateway) fail("origin must attach to a gateway");

  std::vector<char> reached(topology.nodes.size(), 0);
  std::deque<int> frontier{origin};
  reached[origin] = 1;
  while (!frontier.empty()) {
    const int node = frontier.front();
    frontier.pop_front();
    for (const LinkSpec& link : topology.links) {
      if (link.source == node && !reached[link.dest]) {
        reached[link.dest] = 1;
        frontier.push_back(link.dest);
      }
    }
  }
  for (const NodeSpec& node : topology.nodes) {
    if (node.kind == NodeKind::kUser && !reached[node.id]) {
      fail("user " + std::to_string(node.id) + " unreachable from origin");
    }
  }
}

bool CandidatePath::Traverses(int link_id) const {
  return std::find(link_sequence.begin(), link_sequence.end(), link_id) !=
         link_sequence.end();
}

PathEnumeration EnumeratePaths(const Topology& topology, int user,
                               const std::vector<int>& source_nodes,
                               int k_max) {
  if (source_nodes.empty()) {
    throw std::invalid_argument("path enumeration needs at least one source");
  }
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");

  std::vector<std::vector<int>> out_links(topology.nodes.size());
  for (const LinkSpec& link : topology.links) {
    out_links[link.source].push_back(link.id);
  }
  const int max_hops = static_cast<int>(topology.nodes.size()) - 1;

  PathEnumeration result;
  for (int source : source_nodes) {
    std::vector<std::vector<int>> found;
    std::vector<char> on_path(topology.nodes.size(), 0);
    std::vector<int> links;
    on_path[source] = 1;
    for (int hops = 1; hops <= max_hops &&
                       static_cast<int>(found.size()) < k_max;
         ++hops) {
      CollectPaths(topology, out_links, source, user, hops, on_path, links,
                   found);
    }
    if (found.empty()) {
      result.unreachable_sources.push_back(source);
      continue;
    }
    found.resize(std::min<std::size_t>(found.size(), k_max));
    for (std::size_t k = 0; k < found.size(); ++k) {
      CandidatePath path;
      path.user = user;
      path.source_node = source;
      path.index = static_cast<int>(k);
      path.link_sequence = std::move(found[k]);
      result.paths.push_back(std::move(path));
    }
  }
  return result;
}

bool IsValidPath(const Topology& topology, const CandidatePath& path) {
  if (path.link_sequence.empty()) return false;
  std::vector<char> visited(topology.nodes.size(), 0);
  int at = path.source_node;
  visited[at] = 1;
  for (std::size_t h = 0; h < path.link_sequence.size(); ++h) {
    const int id = path.link_sequence[h];
    if (id < 0 || id >= static_cast<int>(topology.links.size())) return false;
    const LinkSpec& link = topology.links[id];
    if (link.source != at || visited[link.dest]) return false;
    const bool last = h + 1 == path.link_sequence.size();
    if ((link.kind == LinkKind::kWireless) != last) return false;
    at = link.dest;
    visited[at] = 1;
  }
  return at == path.user;
}

}  // namespace mecc
