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

// Heterogeneous network topology: gateways, macro and small base stations,
// users and a content origin, connected by wired backhaul links and wireless
// access links. Wireless links carry a fixed large-scale channel gain and the
// Shannon spectral efficiency derived from it.

#ifndef MECC_SCENARIO_H_
#define MECC_SCENARIO_H_

#include <cstdint>
#include <string>
#include <vector>

namespace mecc {

enum class NodeKind { kGateway, kMacroBs, kSmallBs, kUser, kOrigin };
enum class LinkKind { kWired, kWireless };

const char* ToString(NodeKind kind);
const char* ToString(LinkKind kind);

struct Position {
  double x = 0.0;
  double y = 0.0;
};

double Distance(const Position& a, const Position& b);

struct NodeSpec {
  int id = 0;
  NodeKind kind = NodeKind::kUser;
  Position position;
  // Total transmit power over the whole band; meaningful for base stations.
  double tx_power_dbm = 0.0;

  bool IsBaseStation() const {
    return kind == NodeKind::kMacroBs || kind == NodeKind::kSmallBs;
  }
};

struct LinkSpec {
  int id = 0;
  int source = 0;  // transmitting end
  int dest = 0;    // receiving end
  LinkKind kind = LinkKind::kWired;
  double wired_capacity_bps = 0.0;   // wired only
  double channel_gain = 0.0;         // wireless only, linear
  double spectral_efficiency = 0.0;  // wireless only, bits/s/Hz
};

// Directed graph of the network. Node ids equal their index in `nodes` and
// link ids equal their index in `links`.
struct Topology {
  std::vector<NodeSpec> nodes;
  std::vector<LinkSpec> links;
  double spectrum_bandwidth_hz = 0.0;
  double noise_psd_dbm_hz = 0.0;
  std::uint64_t rng_seed = 0;

  int Origin() const;
  std::vector<int> NodesOfKind(NodeKind kind) const;
  // Outgoing link ids of `node`, ascending.
  std::vector<int> OutLinks(int node) const;
};

// Throws std::invalid_argument describing the first violated structural
// invariant (one origin feeding a gateway, wireless links ending at users,
// positive capacities, every user reachable from the origin).
void ValidateTopology(const Topology& topology, double area_m);

// Radio and topology parameters. Defaults reproduce the single-macro
// 250 m x 250 m scenario with fifteen small cells and fifteen users.
struct ScenarioConfig {
  double area_m = 250.0;
  int gateways = 1;
  int macro_bs = 1;
  int small_bs = 15;
  int users = 15;
  double mbs_power_dbm = 49.0;
  double sbs_power_dbm = 20.0;
  double noise_dbm_hz = -174.0;
  double bandwidth_hz = 20e6;
  double mbs_gw_mbps = 100.0;
  double sbs_mbs_mbps = 50.0;
  // The origin sits behind the gateway on a link that should never bind.
  double origin_gw_mbps = 10000.0;
  double shadowing_db = 8.0;
  int attach_m = 3;
  int k_max = 3;
  std::uint64_t seed = 1;
};

// 34 + 40 log10(d); throws std::domain_error for d < 1 m.
double PathlossDb(double distance_m);

// log2(1 + gain * tx_psd / noise_psd), both densities in W/Hz.
double SpectralEfficiency(double gain, double tx_psd_w_hz, double noise_psd_w_hz);

double DbmToWatts(double dbm);

// Builds the network. Deterministic in (config, seed). Shadowing is drawn
// once per base-station/user pair and frozen; each user gets wireless links
// from its `attach_m` strongest base stations. Throws std::runtime_error when
// a user has no candidate base station.
Topology BuildHetnet(const ScenarioConfig& config, std::uint64_t seed);

struct CandidatePath {
  int user = 0;         // node id
  int source_node = 0;  // node id
  int index = 0;        // k, 0-based within (user, source)
  std::vector<int> link_sequence;

  // Link-incidence flag: 1 exactly for links on the path.
  bool Traverses(int link_id) const;
};

struct PathEnumeration {
  std::vector<CandidatePath> paths;
  std::vector<int> unreachable_sources;
};

// For each source node, up to `k_max` loop-free paths to `user`, shortest
// hop count first and ties broken by lexicographic link-id order.
PathEnumeration EnumeratePaths(const Topology& topology, int user,
                               const std::vector<int>& source_nodes, int k_max);

// True when `path` is connected from its source to its user, loop-free and
// ends with a wireless hop.
bool IsValidPath(const Topology& topology, const CandidatePath& path);

}  // namespace mecc

#endif  // MECC_SCENARIO_H_
