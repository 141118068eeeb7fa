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

// Hand-built instances and topologies for unit tests.

#ifndef MECC_TESTS_TESTING_FIXTURES_H_
#define MECC_TESTS_TESTING_FIXTURES_H_

#include <utility>
#include <vector>

#include "mecc/instance.h"
#include "mecc/scenario.h"

namespace mecc::testing {

// Assembles an Instance link by link. Spectrum is unlimited unless set.
class InstanceBuilder {
 public:
  InstanceBuilder(std::vector<double> rates_mbps, std::vector<double> scores,
                  int users, int nodes)
      : instance_(MakeEmptyInstance(std::move(rates_mbps), std::move(scores),
                                    users, nodes)) {
    instance_.bandwidth = 1e9;
  }

  int Wired(double capacity_mbps) {
    instance_.wired_capacity.push_back(capacity_mbps);
    return static_cast<int>(instance_.wired_capacity.size()) - 1;
  }
  int Radio(double efficiency) {
    instance_.efficiency.push_back(efficiency);
    return static_cast<int>(instance_.efficiency.size()) - 1;
  }
  InstanceBuilder& Hit(int user, int node) {
    instance_.hits.set(user, node, HitStatus::kHit);
    return *this;
  }
  InstanceBuilder& Compute(int node, double capacity_mbps) {
    instance_.compute_capacity[node] = capacity_mbps;
    return *this;
  }
  InstanceBuilder& TaskCost(double cost_mbps) {
    instance_.task_cost.assign(instance_.num_users, cost_mbps);
    return *this;
  }
  InstanceBuilder& Bandwidth(double mhz) {
    instance_.bandwidth = mhz;
    return *this;
  }
  InstanceBuilder& Path(int user, int source, std::vector<int> wired,
                        int wireless) {
    RoutedPath path;
    path.user = user;
    path.source = source;
    path.wired = std::move(wired);
    path.wireless = wireless;
    for (const RoutedPath& p : instance_.paths) {
      if (p.user == user && p.source == source) ++path.k;
    }
    instance_.paths.push_back(std::move(path));
    return *this;
  }
  Instance Build() {
    instance_.Finalize();
    return instance_;
  }

 private:
  Instance instance_;
};

// Single user, single edge node (column 0) holding the file, one wired
// link of `link_mbps` and a radio hop that never binds. Ladder v = (2, 8)
// Mbps, s = (1, 2); compute fits one task.
inline Instance OneCellInstance(double link_mbps, bool hit = true,
                                bool origin_path = false) {
  InstanceBuilder b({2.0, 8.0}, {1.0, 2.0}, 1, 1);
  const int backhaul = b.Wired(link_mbps);
  const int radio = b.Radio(10.0);
  if (hit) b.Hit(0, 0);
  b.Compute(0, 5.0).TaskCost(5.0);
  b.Path(0, 0, {backhaul}, radio);
  if (origin_path) {
    const int core = b.Wired(link_mbps);
    b.Path(0, 1, {core, backhaul}, radio);
  }
  return b.Build();
}

// Topology helpers: nodes are added in call order and links get dense ids.
class TopologyBuilder {
 public:
  TopologyBuilder() { topology_.spectrum_bandwidth_hz = 20e6; }

  int Node(NodeKind kind, double x = 10.0, double y = 10.0) {
    NodeSpec node;
    node.id = static_cast<int>(topology_.nodes.size());
    node.kind = kind;
    node.position = {x, y};
    topology_.nodes.push_back(node);
    return node.id;
  }
  int Wired(int from, int to, double capacity_bps = 1e8) {
    LinkSpec link;
    link.id = static_cast<int>(topology_.links.size());
    link.source = from;
    link.dest = to;
    link.kind = LinkKind::kWired;
    link.wired_capacity_bps = capacity_bps;
    topology_.links.push_back(link);
    return link.id;
  }
  int Wireless(int from, int to, double efficiency = 4.0) {
    LinkSpec link;
    link.id = static_cast<int>(topology_.links.size());
    link.source = from;
    link.dest = to;
    link.kind = LinkKind::kWireless;
    link.channel_gain = 1e-10;
    link.spectral_efficiency = efficiency;
    topology_.links.push_back(link);
    return link.id;
  }
  const Topology& topology() const { return topology_; }

 private:
  Topology topology_;
};

}  // namespace mecc::testing

#endif  // MECC_TESTS_TESTING_FIXTURES_H_
