#include "docsdn/topology/topology.hpp"

#include <cctype>
#include <sstream>

namespace docsdn {
namespace {

std::string dot_id(const std::string& id) {
  bool plain = !id.empty() && !std::isdigit(static_cast<unsigned char>(id[0]));
  for (char c : id) plain = plain && (std::isalnum(static_cast<unsigned char>(c)) || c == '_');
  if (plain) return id;
  std::string out = "\"";
  for (char c : id) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out + "\"";
}

}  // namespace

Topology gen_fat_tree(const FatTreeSpec& spec) {
  if (spec.order < 2 || spec.order % 2 != 0) {
    throw ScenarioError("fat-tree order must be an even integer >= 2");
  }
  if (spec.gateways < 1 || spec.hosts_per_edge < 1) {
    throw ScenarioError("fat-tree needs at least one gateway and one host per edge switch");
  }
  if (!(spec.link_capacity > 0)) throw ScenarioError("link capacity must be > 0");
  const int k = spec.order;
  const int half = k / 2;
  Topology t;
  auto add_node = [&](char prefix, int i, NodeKind kind, double mem) {
    t.nodes.push_back({std::string(1, prefix) + std::to_string(i), kind, mem});
  };
  auto link = [&](char pa, int a, char pb, int b) {
    t.edges.push_back({std::string(1, pa) + std::to_string(a),
                       std::string(1, pb) + std::to_string(b), spec.link_capacity, 1.0});
  };

  for (int g = 1; g <= spec.gateways; ++g) add_node('G', g, NodeKind::kGateway, spec.switch_mem);
  for (int c = 1; c <= half * half; ++c) add_node('C', c, NodeKind::kSwitch, spec.switch_mem);
  for (int a = 1; a <= k * half; ++a) add_node('A', a, NodeKind::kSwitch, spec.switch_mem);
  for (int e = 1; e <= k * half; ++e) add_node('E', e, NodeKind::kSwitch, spec.switch_mem);
  const int hosts = k * half * spec.hosts_per_edge;
  for (int h = 1; h <= hosts; ++h) add_node('H', h, NodeKind::kHost, 0.0);

  for (int g = 1; g <= spec.gateways; ++g) {
    for (int c = 1; c <= half * half; ++c) link('G', g, 'C', c);
  }
  for (int c = 0; c < half * half; ++c) {
    for (int pod = 0; pod < k; ++pod) link('C', c + 1, 'A', pod * half + c / half + 1);
  }
  for (int pod = 0; pod < k; ++pod) {
    for (int a = 0; a < half; ++a) {
      for (int e = 0; e < half; ++e) link('A', pod * half + a + 1, 'E', pod * half + e + 1);
    }
  }
  for (int e = 0; e < k * half; ++e) {
    for (int h = 0; h < spec.hosts_per_edge; ++h) {
      link('E', e + 1, 'H', e * spec.hosts_per_edge + h + 1);
    }
  }
  return t;
}

Topology gen_toy(double capacity, double switch_mem) {
  Topology t;
  t.nodes.push_back({"G1", NodeKind::kGateway, switch_mem});
  t.nodes.push_back({"S1", NodeKind::kSwitch, switch_mem});
  t.nodes.push_back({"S2", NodeKind::kSwitch, switch_mem});
  for (int h = 1; h <= 4; ++h) t.nodes.push_back({"H" + std::to_string(h), NodeKind::kHost, 0.0});
  for (const char* s : {"S1", "S2"}) {
    t.edges.push_back({"G1", s, capacity, 1.0});
    for (int h = 1; h <= 4; ++h) t.edges.push_back({s, "H" + std::to_string(h), capacity, 1.0});
  }
  return t;
}

std::string export_dot(const std::vector<Node>& nodes, const std::vector<Edge>& edges,
                       const std::map<std::string, NodeStyle>& annotations) {
  std::ostringstream os;
  os << "digraph topology {\n  edge [dir=none];\n";
  for (const auto& n : nodes) {
    os << "  " << dot_id(n.id) << " [";
    auto it = annotations.find(n.id);
    std::string shape = n.kind == NodeKind::kHost ? "ellipse" : "circle";
    std::string label = n.id;
    if (it != annotations.end()) {
      if (!it->second.color.empty()) os << "color=" << it->second.color << ", ";
      if (!it->second.shape.empty()) shape = it->second.shape;
      if (!it->second.label.empty()) label += "\\n" + it->second.label;
    }
    os << "shape=" << shape << ", label=\"" << label << "\"];\n";
  }
  for (const auto& e : edges) os << "  " << dot_id(e.u) << " -> " << dot_id(e.v) << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace docsdn
