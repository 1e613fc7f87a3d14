#pragma once

#include <cstdint>

#include "docsdn/scenario/scenario.hpp"
#include "docsdn/topology/topology.hpp"

namespace docsdn {

// The four-host DDoS example: one "web" flow from each host to the gateway,
// with H1's risk raised to `h1_risk`.
struct ToyOptions {
  double h1_risk = 10.0;
  double capacity = 10.0;
  double switch_mem = 10.0;
};

Scenario toy_scenario(const ToyOptions& options = {});

struct FatTreeScenarioSpec {
  FatTreeSpec tree;
  int flows = 60;
  int external = 16;
  int high_risk = 2;
  double high_risk_value = 40.0;
  int paths_per_pair = 10;
  std::uint64_t seed = 7;
};

// Order-k fat-tree workload. Half of the hosts may talk to the outside, each
// through one assigned gateway; external flows run gateway -> host. Internal
// flows join distinct random host pairs. High-risk hosts sit under a single
// gateway-permitted edge switch.
Scenario fat_tree_scenario(const FatTreeScenarioSpec& spec);

}  // namespace docsdn
