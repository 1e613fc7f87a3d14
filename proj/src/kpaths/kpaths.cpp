#include "docsdn/kpaths/kpaths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

namespace docsdn {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCostTol = 1e-9;

struct Restrictions {
  std::vector<char> node_blocked;
  std::set<std::pair<int, int>> edge_blocked;  // stored as (min, max)

  bool edge_ok(int a, int b) const { return !edge_blocked.count(std::minmax(a, b)); }
};

// Least-cost path from `from` to `to` that is lexicographically smallest
// among equal-cost ones. Empty when none exists.
std::vector<int> lex_shortest(const Graph& g, int from, int to, const Restrictions& r,
                              double& cost) {
  const int n = g.size();
  std::vector<double> dist(n, kInf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[to] = 0.0;
  pq.push({0.0, to});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (int v : g.neighbors(u)) {
      if (r.node_blocked[v] || !r.edge_ok(u, v)) continue;
      const double nd = d + g.edge(*g.edge_between(u, v)).weight;
      if (nd < dist[v]) {
        dist[v] = nd;
        pq.push({nd, v});
      }
    }
  }
  if (!std::isfinite(dist[from])) return {};
  cost = dist[from];
  std::vector<int> walk{from};
  for (int u = from; u != to;) {
    int next = -1;
    for (int v : g.neighbors(u)) {  // sorted by id
      if (r.node_blocked[v] || !r.edge_ok(u, v) || !std::isfinite(dist[v])) continue;
      const double w = g.edge(*g.edge_between(u, v)).weight;
      if (std::abs(dist[u] - (w + dist[v])) <= kCostTol * std::max(1.0, dist[u])) {
        next = v;
        break;
      }
    }
    if (next < 0) return {};  // numerically inconsistent; should not happen
    walk.push_back(next);
    u = next;
  }
  return walk;
}

struct Candidate {
  double cost;
  std::vector<std::string> ids;
  std::vector<int> nodes;
  bool operator<(const Candidate& o) const {
    if (std::abs(cost - o.cost) > kCostTol) return cost < o.cost;
    return ids < o.ids;
  }
};

Candidate make_candidate(const Graph& g, std::vector<int> nodes) {
  Candidate c{0.0, {}, std::move(nodes)};
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    c.ids.push_back(g.id(c.nodes[i]));
    if (i > 0) c.cost += g.edge(*g.edge_between(c.nodes[i - 1], c.nodes[i])).weight;
  }
  return c;
}

const std::vector<int> kEmpty;

}  // namespace

int Path::rank(const std::string& node) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] == node) return static_cast<int>(i);
  }
  return -1;
}

std::string Path::str() const {
  std::string out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i > 0) out.push_back('-');
    out += nodes[i];
  }
  return out;
}

std::vector<Path> k_shortest_paths(const Graph& g, const std::string& s, const std::string& t,
                                   int k) {
  const int si = g.index(s);
  const int ti = g.index(t);
  if (si < 0 || ti < 0) throw ScenarioError("k_shortest_paths: unknown endpoint");
  if (si == ti) throw ScenarioError("k_shortest_paths: source equals target");
  if (k < 1) throw ScenarioError("k_shortest_paths: k must be >= 1");

  Restrictions none{std::vector<char>(g.size(), 0), {}};
  double cost = 0.0;
  std::vector<int> first = lex_shortest(g, si, ti, none, cost);
  if (first.empty()) return {};

  std::vector<Candidate> found{make_candidate(g, std::move(first))};
  std::set<Candidate> pending;
  while (static_cast<int>(found.size()) < k) {
    const Candidate& last = found.back();
    for (std::size_t i = 0; i + 1 < last.nodes.size(); ++i) {
      Restrictions r{std::vector<char>(g.size(), 0), {}};
      for (std::size_t j = 0; j < i; ++j) r.node_blocked[last.nodes[j]] = 1;
      for (const auto& p : found) {
        if (p.nodes.size() > i + 1 &&
            std::equal(p.nodes.begin(), p.nodes.begin() + i + 1, last.nodes.begin())) {
          r.edge_blocked.insert(std::minmax(p.nodes[i], p.nodes[i + 1]));
        }
      }
      double spur_cost = 0.0;
      std::vector<int> spur = lex_shortest(g, last.nodes[i], ti, r, spur_cost);
      if (spur.empty()) continue;
      std::vector<int> full(last.nodes.begin(), last.nodes.begin() + i);
      full.insert(full.end(), spur.begin(), spur.end());
      Candidate c = make_candidate(g, std::move(full));
      const bool known = std::any_of(found.begin(), found.end(),
                                     [&](const Candidate& f) { return f.ids == c.ids; });
      if (!known) pending.insert(std::move(c));
    }
    if (pending.empty()) break;
    found.push_back(*pending.begin());
    pending.erase(pending.begin());
  }

  std::vector<Path> out;
  for (auto& c : found) out.push_back({-1, std::move(c.ids), c.cost});
  return out;
}

PathPool::PathPool(const Graph& g, std::vector<Path> paths) : paths_(std::move(paths)) {
  for (int id = 0; id < static_cast<int>(paths_.size()); ++id) {
    Path& p = paths_[id];
    p.id = id;
    by_pair_[{p.src(), p.dst()}].push_back(id);
    for (const auto& n : p.nodes) by_node_[n].push_back(id);
    for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) {
      const auto e = g.edge_between(g.index(p.nodes[i]), g.index(p.nodes[i + 1]));
      if (!e) throw ScenarioError("path " + p.str() + " uses a missing link");
      by_edge_[*e].push_back(id);
    }
  }
}

const std::vector<int>& PathPool::for_pair(const std::string& s, const std::string& t) const {
  auto it = by_pair_.find({s, t});
  return it == by_pair_.end() ? kEmpty : it->second;
}

const std::vector<int>& PathPool::through_node(const std::string& n) const {
  auto it = by_node_.find(n);
  return it == by_node_.end() ? kEmpty : it->second;
}

const std::vector<int>& PathPool::through_edge(int edge_index) const {
  auto it = by_edge_.find(edge_index);
  return it == by_edge_.end() ? kEmpty : it->second;
}

std::string PathPool::dump() const {
  std::ostringstream os;
  for (const auto& p : paths_) {
    os << "path " << p.id << ' ' << p.src() << "->" << p.dst() << " len=" << p.len() << ' '
       << p.str() << '\n';
  }
  return os.str();
}

PathPool build_pool(const Scenario& s, const Graph& g) {
  std::vector<Path> all;
  std::set<std::pair<std::string, std::string>> done;
  for (const auto& f : s.flows) {
    if (!done.insert({f.src, f.dst}).second) continue;
    auto paths = k_shortest_paths(g, f.src, f.dst, s.paths_per_pair);
    if (paths.empty()) {
      throw ScenarioError("no physical path for flow " + f.src + "->" + f.dst + " " + f.type);
    }
    for (auto& p : paths) all.push_back(std::move(p));
  }
  return PathPool(g, std::move(all));
}

PathPool build_pool(const Scenario& s) { return build_pool(s, Graph(s)); }

}  // namespace docsdn
