#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "docsdn/scenario/scenario.hpp"
#include "docsdn/topology/graph.hpp"

namespace docsdn {

// A directed walk over physical links; rank(n) is n's position, source = 0.
struct Path {
  int id = -1;
  std::vector<std::string> nodes;
  double cost = 0.0;

  int len() const { return static_cast<int>(nodes.size()) - 1; }
  int rank(const std::string& node) const;  // -1 when absent
  bool contains(const std::string& node) const { return rank(node) >= 0; }
  const std::string& src() const { return nodes.front(); }
  const std::string& dst() const { return nodes.back(); }
  std::string str() const;  // "a-b-c"
};

// Up to k simple s->t paths of least total edge weight, ordered by cost and
// then lexicographically by node-id sequence (Yen's algorithm).
std::vector<Path> k_shortest_paths(const Graph& g, const std::string& s, const std::string& t,
                                   int k);

class PathPool {
 public:
  PathPool() = default;
  PathPool(const Graph& g, std::vector<Path> paths);

  const std::vector<Path>& paths() const { return paths_; }
  const Path& path(int id) const { return paths_.at(id); }
  std::size_t size() const { return paths_.size(); }

  const std::vector<int>& for_pair(const std::string& s, const std::string& t) const;
  const std::vector<int>& through_node(const std::string& n) const;
  const std::vector<int>& through_edge(int edge_index) const;
  const std::map<std::pair<std::string, std::string>, std::vector<int>>& pairs() const {
    return by_pair_;
  }

  std::string dump() const;

 private:
  std::vector<Path> paths_;
  std::map<std::pair<std::string, std::string>, std::vector<int>> by_pair_;
  std::map<std::string, std::vector<int>> by_node_;
  std::map<int, std::vector<int>> by_edge_;
};

// Primes k = paths_per_pair paths for every ordered (src, dst) among flows.
PathPool build_pool(const Scenario& s, const Graph& g);
PathPool build_pool(const Scenario& s);

}  // namespace docsdn
