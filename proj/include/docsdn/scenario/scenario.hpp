#pragma once

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace docsdn {

inline constexpr std::string_view kAnyType = "*";

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class NodeKind { kHost, kSwitch, kGateway };

const char* to_string(NodeKind k);

struct Node {
  std::string id;
  NodeKind kind = NodeKind::kSwitch;
  double mem = 0.0;
  friend bool operator==(const Node&, const Node&) = default;
};

// Undirected physical link. weight is the routing cost (hop count by default).
struct Edge {
  std::string u;
  std::string v;
  double capacity = 1.0;
  double weight = 1.0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct FlowSpec {
  std::string src;
  std::string dst;
  std::string type;
  double demand = 1.0;
  friend bool operator==(const FlowSpec&, const FlowSpec&) = default;
};

struct RiskModel {
  std::map<std::pair<std::string, std::string>, double> risk;  // (node, type)
  int radius = 2;
  double fallback = 1.0;  // fills pairs missing from the file

  double at(const std::string& node, const std::string& type) const;
  friend bool operator==(const RiskModel&, const RiskModel&) = default;
};

struct SecurityCosts {
  std::map<std::string, double> fw_cost;  // per type, optionally "*"
  double pi_cost = 1.0;
  double fw_comp = 1.0;
  double pi_comp = 1.0;
  std::optional<double> penalty_scale;  // unset: max flowRisk per iteration

  // Memory footprint of a firewall for `type`; "*" defaults to the sum of
  // all per-type costs when not given explicitly.
  double firewall_cost(const std::string& type,
                       const std::vector<std::string>& types) const;
  friend bool operator==(const SecurityCosts&, const SecurityCosts&) = default;
};

struct Weights {
  std::array<double, 3> alpha{1.0, 10.0, 0.01};
  std::array<double, 4> beta{1.0, 0.01, 1.0, 1.0};
  friend bool operator==(const Weights&, const Weights&) = default;
};

// Thresholds used when proposing segregation cuts.
struct FeedbackParams {
  std::optional<double> low_risk_threshold;  // unset: sqrt(median * max)
  double high_risk_fraction = 0.8;
  friend bool operator==(const FeedbackParams&, const FeedbackParams&) = default;
};

struct Scenario {
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::vector<std::string> traffic_types;
  std::vector<FlowSpec> flows;
  RiskModel risk;
  SecurityCosts costs;
  Weights weights;
  int paths_per_pair = 10;
  FeedbackParams feedback;
  bool defend_hosts = false;  // allow fw/pi placement on hosts

  const Node* find_node(std::string_view id) const;
  const Node& node(std::string_view id) const;
  friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct Violation {
  std::string entity;
  std::string message;
  friend bool operator==(const Violation&, const Violation&) = default;
};

std::vector<Violation> validate_scenario(const Scenario& s);

// Parses scenario JSON. Syntax errors carry the line/column; semantic
// problems are reported as the list of validation violations.
Scenario parse_scenario(std::string_view text);
std::string serialize_scenario(const Scenario& s);

Scenario load_scenario_file(const std::string& path);
void save_scenario_file(const Scenario& s, const std::string& path);

}  // namespace docsdn
