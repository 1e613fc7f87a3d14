#include "docsdn/fixtures/fixtures.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <tuple>

namespace docsdn {
namespace {

// Portable bounded draw; std distributions differ between standard libraries.
std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

template <typename T>
void shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(rng, i)]);
}

}  // namespace

Scenario toy_scenario(const ToyOptions& options) {
  const Topology topo = gen_toy(options.capacity, options.switch_mem);
  Scenario s;
  s.nodes = topo.nodes;
  s.edges = topo.edges;
  s.traffic_types = {"web"};
  for (int h = 1; h <= 4; ++h) s.flows.push_back({"H" + std::to_string(h), "G1", "web", 1.0});
  // Radius 1: with 2 every node is within reach of the gateway and all
  // flows would carry the same risk.
  s.risk.radius = 1;
  for (const auto& n : s.nodes) s.risk.risk[{n.id, "web"}] = 1.0;
  s.risk.risk[{"H1", "web"}] = options.h1_risk;
  s.costs.fw_cost = {{"web", 1.0}};
  s.costs.pi_cost = 1.0;
  // High enough that nothing is deployed once every risk is at baseline.
  s.costs.fw_comp = 13.0;
  s.costs.pi_comp = 13.0;
  s.paths_per_pair = 2;
  return s;
}

Scenario fat_tree_scenario(const FatTreeScenarioSpec& spec) {
  const Topology topo = gen_fat_tree(spec.tree);
  Scenario s;
  s.nodes = topo.nodes;
  s.edges = topo.edges;
  s.traffic_types = {"web", "storage"};
  s.paths_per_pair = spec.paths_per_pair;

  std::mt19937_64 rng(spec.seed);
  const int k = spec.tree.order;
  const int edges = k * k / 2;
  const int per_edge = spec.tree.hosts_per_edge;
  auto host = [](int i) { return "H" + std::to_string(i + 1); };
  const int hosts = edges * per_edge;

  // Half of the edge switches (and so half of the hosts) may reach a gateway.
  std::vector<int> edge_order(edges);
  for (int e = 0; e < edges; ++e) edge_order[e] = e;
  shuffle(edge_order, rng);
  std::vector<int> permitted_edges(edge_order.begin(), edge_order.begin() + std::max(1, edges / 2));
  std::vector<std::pair<std::string, std::string>> permitted;  // (host, gateway)
  for (int e : permitted_edges) {
    for (int h = 0; h < per_edge; ++h) {
      const std::string gw = "G" + std::to_string(below(rng, spec.tree.gateways) + 1);
      permitted.emplace_back(host(e * per_edge + h), gw);
    }
  }
  if (spec.high_risk > per_edge) {
    throw ScenarioError("high-risk hosts must fit under one edge switch");
  }
  std::vector<std::string> risky;
  for (int h = 0; h < spec.high_risk; ++h) risky.push_back(host(permitted_edges.front() * per_edge + h));

  std::set<std::tuple<std::string, std::string, std::string>> used;
  auto add_flow = [&](const std::string& a, const std::string& b, const std::string& t) {
    if (!used.emplace(a, b, t).second) return false;
    s.flows.push_back({a, b, t, 1.0});
    return true;
  };

  // External: gateway -> permitted host.
  std::vector<std::tuple<std::string, std::string, std::string>> ext;
  for (const auto& [h, gw] : permitted) {
    for (const auto& t : s.traffic_types) ext.emplace_back(gw, h, t);
  }
  if (spec.external > static_cast<int>(ext.size())) {
    throw ScenarioError("not enough gateway/host/type combinations for the external flows");
  }
  shuffle(ext, rng);
  for (int i = 0; i < spec.external; ++i) add_flow(std::get<0>(ext[i]), std::get<1>(ext[i]), std::get<2>(ext[i]));

  // Internal: first a round that touches every host, then uniform pairs.
  const int internal = spec.flows - spec.external;
  if (internal < 0) throw ScenarioError("more external flows than flows");
  std::vector<int> order(hosts);
  for (int i = 0; i < hosts; ++i) order[i] = i;
  shuffle(order, rng);
  int made = 0;
  for (int i = 0; i + 1 < hosts && made < internal; i += 2) {
    made += add_flow(host(order[i]), host(order[i + 1]),
                     s.traffic_types[below(rng, s.traffic_types.size())]);
  }
  const long cap = static_cast<long>(hosts) * (hosts - 1) * static_cast<long>(s.traffic_types.size());
  if (internal > cap) throw ScenarioError("too many internal flows for the host count");
  while (made < internal) {
    const int a = static_cast<int>(below(rng, hosts));
    int b = static_cast<int>(below(rng, hosts - 1));
    if (b >= a) ++b;
    made += add_flow(host(a), host(b), s.traffic_types[below(rng, s.traffic_types.size())]);
  }

  for (const auto& n : s.nodes) {
    for (const auto& t : s.traffic_types) s.risk.risk[{n.id, t}] = 1.0;
  }
  for (const auto& h : risky) {
    for (const auto& t : s.traffic_types) s.risk.risk[{h, t}] = spec.high_risk_value;
  }
  s.costs.fw_cost = {{"web", 1.0}, {"storage", 1.0}};
  s.costs.pi_cost = 1.0;
  s.costs.fw_comp = 1.0;
  s.costs.pi_comp = 1.0;
  s.weights.beta = {1.0, 0.01, 20.0, 1.0};
  return s;
}

}  // namespace docsdn
