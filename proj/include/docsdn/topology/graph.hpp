#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "docsdn/scenario/scenario.hpp"

namespace docsdn {

// Indexed view of an undirected physical topology. Neighbor lists are sorted
// by node id so traversals are deterministic.
class Graph {
 public:
  Graph(const std::vector<Node>& nodes, const std::vector<Edge>& edges);
  explicit Graph(const Scenario& s) : Graph(s.nodes, s.edges) {}

  int size() const { return static_cast<int>(ids_.size()); }
  int index(std::string_view id) const;  // -1 when unknown
  const std::string& id(int i) const { return ids_.at(i); }
  const std::vector<int>& neighbors(int i) const { return adj_.at(i); }
  // Index into the edge list, if a and b are adjacent.
  std::optional<int> edge_between(int a, int b) const;
  const Edge& edge(int e) const { return edges_.at(e); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, int> index_;
  std::vector<std::vector<int>> adj_;
  std::vector<Edge> edges_;
  std::unordered_map<long long, int> edge_index_;
};

}  // namespace docsdn
