#include "docsdn/topology/graph.hpp"

#include <algorithm>

namespace docsdn {
namespace {

long long key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<long long>(a) << 32) | static_cast<unsigned>(b);
}

}  // namespace

Graph::Graph(const std::vector<Node>& nodes, const std::vector<Edge>& edges) : edges_(edges) {
  for (const auto& n : nodes) {
    if (!index_.emplace(n.id, static_cast<int>(ids_.size())).second) {
      throw ScenarioError("duplicate node id " + n.id);
    }
    ids_.push_back(n.id);
  }
  adj_.resize(ids_.size());
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
    const int a = index(edges_[e].u);
    const int b = index(edges_[e].v);
    if (a < 0 || b < 0) throw ScenarioError("edge references unknown node");
    adj_[a].push_back(b);
    adj_[b].push_back(a);
    edge_index_[key(a, b)] = e;
  }
  for (auto& list : adj_) {
    std::sort(list.begin(), list.end(), [&](int x, int y) { return ids_[x] < ids_[y]; });
  }
}

int Graph::index(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? -1 : it->second;
}

std::optional<int> Graph::edge_between(int a, int b) const {
  auto it = edge_index_.find(key(a, b));
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace docsdn
