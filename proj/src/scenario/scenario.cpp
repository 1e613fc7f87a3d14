#include "docsdn/scenario/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace docsdn {
namespace {

using json = nlohmann::ordered_json;

void check_keys(const json& obj, std::initializer_list<const char*> required,
                std::initializer_list<const char*> optional, const std::string& where) {
  if (!obj.is_object()) throw ScenarioError(where + ": expected an object");
  std::set<std::string> allowed;
  for (const char* k : required) {
    allowed.insert(k);
    if (!obj.contains(k)) throw ScenarioError(where + ": missing key '" + k + "'");
  }
  for (const char* k : optional) allowed.insert(k);
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw ScenarioError(where + ": unknown key '" + item.key() + "'");
    }
  }
}

const json& array_at(const json& obj, const char* key) {
  const json& a = obj.at(key);
  if (!a.is_array()) throw ScenarioError(std::string("'") + key + "' must be an array");
  return a;
}

NodeKind parse_kind(const std::string& s, const std::string& where) {
  if (s == "host") return NodeKind::kHost;
  if (s == "switch") return NodeKind::kSwitch;
  if (s == "gateway") return NodeKind::kGateway;
  throw ScenarioError(where + ": unknown node kind '" + s + "'");
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

std::string edge_name(const Edge& e) { return "edge " + e.u + "-" + e.v; }
std::string flow_name(const FlowSpec& f) {
  return "flow " + f.src + "->" + f.dst + " " + f.type;
}

Scenario from_json(const json& j) {
  check_keys(j,
             {"nodes", "edges", "traffic_types", "flows", "risk", "costs", "weights",
              "paths_per_pair"},
             {"risk_radius", "risk_default", "feedback", "defend_hosts"}, "scenario");
  Scenario s;
  for (const auto& n : array_at(j, "nodes")) {
    check_keys(n, {"id", "kind"}, {"mem"}, "node");
    const auto id = n.at("id").get<std::string>();
    s.nodes.push_back({id, parse_kind(n.at("kind").get<std::string>(), "node " + id),
                       n.value("mem", 0.0)});
  }
  for (const auto& e : array_at(j, "edges")) {
    check_keys(e, {"u", "v", "capacity"}, {"weight"}, "edge");
    s.edges.push_back({e.at("u").get<std::string>(), e.at("v").get<std::string>(),
                       e.at("capacity").get<double>(), e.value("weight", 1.0)});
  }
  for (const auto& t : array_at(j, "traffic_types")) s.traffic_types.push_back(t.get<std::string>());
  for (const auto& f : array_at(j, "flows")) {
    check_keys(f, {"src", "dst", "type", "demand"}, {}, "flow");
    s.flows.push_back({f.at("src").get<std::string>(), f.at("dst").get<std::string>(),
                       f.at("type").get<std::string>(), f.at("demand").get<double>()});
  }
  s.risk.radius = j.value("risk_radius", 2);
  s.risk.fallback = j.value("risk_default", 1.0);
  for (const auto& r : array_at(j, "risk")) {
    check_keys(r, {"node", "type", "value"}, {}, "risk entry");
    auto key = std::make_pair(r.at("node").get<std::string>(), r.at("type").get<std::string>());
    if (!s.risk.risk.emplace(key, r.at("value").get<double>()).second) {
      throw ScenarioError("duplicate risk entry for (" + key.first + ", " + key.second + ")");
    }
  }
  for (const auto& n : s.nodes) {
    for (const auto& t : s.traffic_types) s.risk.risk.try_emplace({n.id, t}, s.risk.fallback);
  }

  const json& c = j.at("costs");
  check_keys(c, {"fw_cost", "pi_cost", "fw_comp", "pi_comp"}, {"penalty_scale"}, "costs");
  if (!c.at("fw_cost").is_object()) throw ScenarioError("costs.fw_cost must be an object");
  for (const auto& item : c.at("fw_cost").items()) {
    s.costs.fw_cost[item.key()] = item.value().get<double>();
  }
  s.costs.pi_cost = c.at("pi_cost").get<double>();
  s.costs.fw_comp = c.at("fw_comp").get<double>();
  s.costs.pi_comp = c.at("pi_comp").get<double>();
  if (c.contains("penalty_scale")) s.costs.penalty_scale = c.at("penalty_scale").get<double>();

  const json& w = j.at("weights");
  check_keys(w, {}, {"alpha", "beta"}, "weights");
  if (w.contains("alpha")) s.weights.alpha = w.at("alpha").get<std::array<double, 3>>();
  if (w.contains("beta")) s.weights.beta = w.at("beta").get<std::array<double, 4>>();
  s.paths_per_pair = j.at("paths_per_pair").get<int>();

  if (j.contains("feedback")) {
    const json& fb = j.at("feedback");
    check_keys(fb, {}, {"low_risk_threshold", "high_risk_fraction"}, "feedback");
    if (fb.contains("low_risk_threshold")) {
      s.feedback.low_risk_threshold = fb.at("low_risk_threshold").get<double>();
    }
    s.feedback.high_risk_fraction = fb.value("high_risk_fraction", 0.8);
  }
  s.defend_hosts = j.value("defend_hosts", false);
  return s;
}

json to_json(const Scenario& s) {
  json j;
  j["nodes"] = json::array();
  for (const auto& n : s.nodes) {
    j["nodes"].push_back({{"id", n.id}, {"kind", to_string(n.kind)}, {"mem", n.mem}});
  }
  j["edges"] = json::array();
  for (const auto& e : s.edges) {
    j["edges"].push_back({{"u", e.u}, {"v", e.v}, {"capacity", e.capacity}, {"weight", e.weight}});
  }
  j["traffic_types"] = s.traffic_types;
  j["flows"] = json::array();
  for (const auto& f : s.flows) {
    j["flows"].push_back({{"src", f.src}, {"dst", f.dst}, {"type", f.type}, {"demand", f.demand}});
  }
  j["risk"] = json::array();
  for (const auto& [key, v] : s.risk.risk) {
    j["risk"].push_back({{"node", key.first}, {"type", key.second}, {"value", v}});
  }
  j["risk_radius"] = s.risk.radius;
  j["risk_default"] = s.risk.fallback;
  json costs;
  costs["fw_cost"] = json::object();
  for (const auto& [t, v] : s.costs.fw_cost) costs["fw_cost"][t] = v;
  costs["pi_cost"] = s.costs.pi_cost;
  costs["fw_comp"] = s.costs.fw_comp;
  costs["pi_comp"] = s.costs.pi_comp;
  if (s.costs.penalty_scale) costs["penalty_scale"] = *s.costs.penalty_scale;
  j["costs"] = costs;
  j["weights"] = {{"alpha", s.weights.alpha}, {"beta", s.weights.beta}};
  j["paths_per_pair"] = s.paths_per_pair;
  json fb;
  if (s.feedback.low_risk_threshold) fb["low_risk_threshold"] = *s.feedback.low_risk_threshold;
  fb["high_risk_fraction"] = s.feedback.high_risk_fraction;
  j["feedback"] = fb;
  j["defend_hosts"] = s.defend_hosts;
  return j;
}

}  // namespace

const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::kHost: return "host";
    case NodeKind::kSwitch: return "switch";
    case NodeKind::kGateway: return "gateway";
  }
  return "?";
}

double RiskModel::at(const std::string& node, const std::string& type) const {
  auto it = risk.find({node, type});
  if (it == risk.end()) throw ScenarioError("no risk value for (" + node + ", " + type + ")");
  return it->second;
}

double SecurityCosts::firewall_cost(const std::string& type,
                                    const std::vector<std::string>& types) const {
  if (auto it = fw_cost.find(type); it != fw_cost.end()) return it->second;
  if (type == kAnyType) {
    double sum = 0.0;
    for (const auto& t : types) sum += firewall_cost(t, types);
    return sum;
  }
  throw ScenarioError("no firewall cost for type " + type);
}

const Node* Scenario::find_node(std::string_view id) const {
  for (const auto& n : nodes) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

const Node& Scenario::node(std::string_view id) const {
  const Node* n = find_node(id);
  if (!n) throw ScenarioError("unknown node " + std::string(id));
  return *n;
}

std::vector<Violation> validate_scenario(const Scenario& s) {
  std::vector<Violation> out;
  auto add = [&](std::string entity, std::string msg) {
    out.push_back({std::move(entity), std::move(msg)});
  };

  std::unordered_map<std::string, int> index;
  for (const auto& n : s.nodes) {
    if (n.id.empty()) add("node", "empty id");
    if (!index.emplace(n.id, static_cast<int>(index.size())).second) {
      add("node " + n.id, "duplicate id");
    }
    if (!finite_nonneg(n.mem)) add("node " + n.id, "mem must be finite and non-negative");
  }

  std::vector<int> parent(index.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& e : s.edges) {
    const bool ok_u = index.count(e.u), ok_v = index.count(e.v);
    if (!ok_u) add(edge_name(e), "unknown endpoint " + e.u);
    if (!ok_v) add(edge_name(e), "unknown endpoint " + e.v);
    if (e.u == e.v) add(edge_name(e), "self-loop");
    if (!(std::isfinite(e.capacity) && e.capacity > 0)) add(edge_name(e), "capacity must be > 0");
    if (!(std::isfinite(e.weight) && e.weight > 0)) add(edge_name(e), "weight must be > 0");
    if (!pairs.insert(std::minmax(e.u, e.v)).second) add(edge_name(e), "duplicate edge");
    if (ok_u && ok_v) parent[find(index[e.u])] = find(index[e.v]);
  }

  std::set<std::string> types;
  for (const auto& t : s.traffic_types) {
    if (t.empty() || t == kAnyType) add("type " + t, "invalid traffic type name");
    if (!types.insert(t).second) add("type " + t, "duplicate traffic type");
  }

  std::set<std::tuple<std::string, std::string, std::string>> seen_flows;
  for (const auto& f : s.flows) {
    const std::string name = flow_name(f);
    if (f.src == f.dst) add(name, "degenerate flow (src = dst)");
    if (f.type == kAnyType) add(name, "wildcard type is not allowed in flows");
    else if (!types.count(f.type)) add(name, "unknown traffic type");
    if (!(std::isfinite(f.demand) && f.demand > 0)) add(name, "demand must be > 0");
    if (!seen_flows.emplace(f.src, f.dst, f.type).second) add(name, "duplicate flow");
    bool endpoints_ok = true;
    for (const auto* id : {&f.src, &f.dst}) {
      const Node* n = s.find_node(*id);
      if (!n) {
        add(name, "unknown endpoint " + *id);
        endpoints_ok = false;
      } else if (n->kind == NodeKind::kSwitch) {
        add(name, "endpoint " + *id + " is a switch");
      }
    }
    if (endpoints_ok && f.src != f.dst && find(index[f.src]) != find(index[f.dst])) {
      add(name, "unreachable: no physical path between endpoints");
    }
  }

  if (s.risk.radius < 0) add("risk", "radius must be >= 0");
  for (const auto& [key, v] : s.risk.risk) {
    const std::string name = "risk (" + key.first + ", " + key.second + ")";
    if (!index.count(key.first)) add(name, "unknown node");
    if (!types.count(key.second)) add(name, "unknown traffic type");
    if (!(std::isfinite(v) && v >= 1.0)) add(name, "risk must be >= 1");
  }
  for (const auto& n : s.nodes) {
    for (const auto& t : s.traffic_types) {
      if (!s.risk.risk.count({n.id, t})) add("risk (" + n.id + ", " + t + ")", "missing");
    }
  }

  for (const auto& [t, v] : s.costs.fw_cost) {
    if (t != kAnyType && !types.count(t)) add("fw_cost " + t, "unknown traffic type");
    if (!finite_nonneg(v)) add("fw_cost " + t, "must be finite and non-negative");
  }
  for (const auto& t : s.traffic_types) {
    if (!s.costs.fw_cost.count(t)) add("fw_cost " + t, "missing");
  }
  if (!finite_nonneg(s.costs.pi_cost)) add("pi_cost", "must be finite and non-negative");
  if (!finite_nonneg(s.costs.fw_comp)) add("fw_comp", "must be finite and non-negative");
  if (!finite_nonneg(s.costs.pi_comp)) add("pi_comp", "must be finite and non-negative");
  if (s.costs.penalty_scale &&
      !(std::isfinite(*s.costs.penalty_scale) && *s.costs.penalty_scale > 0)) {
    add("penalty_scale", "must be > 0");
  }
  for (double a : s.weights.alpha) {
    if (!finite_nonneg(a)) add("weights.alpha", "must be finite and non-negative");
  }
  for (double b : s.weights.beta) {
    if (!finite_nonneg(b)) add("weights.beta", "must be finite and non-negative");
  }
  if (s.paths_per_pair < 1) add("paths_per_pair", "must be >= 1");
  if (s.feedback.low_risk_threshold && !std::isfinite(*s.feedback.low_risk_threshold)) {
    add("feedback.low_risk_threshold", "must be finite");
  }
  if (!(s.feedback.high_risk_fraction > 0 && s.feedback.high_risk_fraction <= 1)) {
    add("feedback.high_risk_fraction", "must lie in (0, 1]");
  }
  return out;
}

Scenario parse_scenario(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("syntax error: ") + e.what());
  }
  Scenario s;
  try {
    s = from_json(j);
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("malformed scenario: ") + e.what());
  }
  const auto violations = validate_scenario(s);
  if (!violations.empty()) {
    std::string msg = "invalid scenario:";
    for (const auto& v : violations) msg += "\n  " + v.entity + ": " + v.message;
    throw ScenarioError(msg);
  }
  return s;
}

std::string serialize_scenario(const Scenario& s) { return to_json(s).dump(2) + "\n"; }

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

void save_scenario_file(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  out << serialize_scenario(s);
  if (!out) throw ScenarioError("cannot write scenario file " + path);
}

}  // namespace docsdn
