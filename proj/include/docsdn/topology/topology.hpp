#pragma once

#include <map>
#include <string>
#include <vector>

#include "docsdn/scenario/scenario.hpp"

namespace docsdn {

struct Topology {
  std::vector<Node> nodes;
  std::vector<Edge> edges;
};

struct FatTreeSpec {
  int order = 4;
  int gateways = 2;
  int hosts_per_edge = 2;
  double link_capacity = 100.0;
  double switch_mem = 10.0;
};

// Gateways G*, cores C*, aggregates A*, edge switches E*, hosts H*, all
// numbered from 1. Core j (0-based) links to aggregate j / (k/2) of every
// pod; each gateway links to every core.
Topology gen_fat_tree(const FatTreeSpec& spec);

// One gateway G1, switches S1 and S2, hosts H1..H4; both switches link to
// the gateway and to every host.
Topology gen_toy(double capacity = 10.0, double switch_mem = 10.0);

struct NodeStyle {
  std::string color;  // e.g. red for high risk, green for recovered
  std::string shape;  // e.g. box for a firewall
  std::string label;  // extra text appended to the id
};

// DOT digraph with undirected-looking edges (dir=none).
std::string export_dot(const std::vector<Node>& nodes, const std::vector<Edge>& edges,
                       const std::map<std::string, NodeStyle>& annotations = {});

}  // namespace docsdn
