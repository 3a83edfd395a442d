#include "rgkit/graph/graph_json.hpp"

#include <fstream>

#include "rgkit/errors.hpp"

namespace rgkit::graph {

using nlohmann::json;

json to_json(const FeynmanGraph& g) {
  json out;
  out["vertices"] = json::array();
  for (const auto& v : g.vertices()) {
    json jv{{"id", v.id}, {"kind", v.kind == VertexKind::internal ? "internal" : "external"}};
    if (v.kind == VertexKind::internal && v.degree != 4) jv["degree"] = v.degree;
    out["vertices"].push_back(jv);
  }
  out["lines"] = json::array();
  for (const auto& line : g.lines())
    out["lines"].push_back({{"from", {line.from.vertex, line.from.slot}}, {"to", {line.to.vertex, line.to.slot}}});
  return out;
}

namespace {

HalfEdge half_edge(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
    throw InputError(std::string("line field '") + what + "' must be [vertex, slot]");
  return {j[0].get<int>(), j[1].get<int>()};
}

}  // namespace

FeynmanGraph from_json(const json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j.contains("lines"))
    throw InputError("graph document needs 'vertices' and 'lines'");
  if (!j["vertices"].is_array() || !j["lines"].is_array()) throw InputError("'vertices' and 'lines' must be arrays");
  std::vector<Vertex> vertices;
  for (const auto& jv : j["vertices"]) {
    if (!jv.is_object() || !jv.contains("id") || !jv["id"].is_number_integer())
      throw InputError("vertex entries need an integer 'id'");
    Vertex v;
    v.id = jv["id"].get<int>();
    std::string kind = jv.value("kind", std::string("internal"));
    if (kind == "internal") {
      v.kind = VertexKind::internal;
      v.degree = jv.value("degree", 4);
    } else if (kind == "external") {
      v.kind = VertexKind::external;
      v.degree = 1;
    } else {
      throw InputError("unknown vertex kind '" + kind + "'");
    }
    vertices.push_back(v);
  }
  std::vector<Line> lines;
  for (const auto& jl : j["lines"]) {
    if (!jl.is_object() || !jl.contains("from") || !jl.contains("to"))
      throw InputError("line entries need 'from' and 'to'");
    lines.push_back({half_edge(jl["from"], "from"), half_edge(jl["to"], "to")});
  }
  return FeynmanGraph(std::move(vertices), std::move(lines));
}

FeynmanGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InputError("graph file " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

void save_graph(const FeynmanGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write graph file " + path.string());
  out << to_json(g).dump(2) << "\n";
}

}  // namespace rgkit::graph
