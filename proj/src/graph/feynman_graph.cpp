#include "rgkit/graph/feynman_graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "rgkit/errors.hpp"

namespace rgkit::graph {

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

}  // namespace

FeynmanGraph::FeynmanGraph(std::vector<Vertex> vertices, std::vector<Line> lines)
    : vertices_(std::move(vertices)), lines_(std::move(lines)) {
  std::sort(vertices_.begin(), vertices_.end(), [](const Vertex& a, const Vertex& b) { return a.id < b.id; });
  for (std::size_t k = 1; k < vertices_.size(); ++k)
    if (vertices_[k].id == vertices_[k - 1].id) throw InputError("duplicate vertex id " + std::to_string(vertices_[k].id));
  for (const auto& v : vertices_) {
    if (v.degree < 0) throw InputError("negative degree at vertex " + std::to_string(v.id));
    if (v.kind == VertexKind::external && v.degree != 1)
      throw InputError("external vertex " + std::to_string(v.id) + " must have exactly one slot");
  }
  std::set<HalfEdge> used;
  auto check = [&](const HalfEdge& h) {
    if (!has_vertex(h.vertex)) throw InputError("line references unknown vertex " + std::to_string(h.vertex));
    const Vertex& v = vertex(h.vertex);
    if (h.slot < 0 || h.slot >= v.degree)
      throw InputError("slot " + std::to_string(h.slot) + " out of range at vertex " + std::to_string(h.vertex));
    if (!used.insert(h).second)
      throw InputError("half-edge (" + std::to_string(h.vertex) + "," + std::to_string(h.slot) +
                       ") used by more than one line");
  };
  for (const auto& line : lines_) {
    check(line.from);
    check(line.to);
  }
  std::sort(lines_.begin(), lines_.end());
}

bool FeynmanGraph::has_vertex(int id) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), id,
                             [](const Vertex& v, int key) { return v.id < key; });
  return it != vertices_.end() && it->id == id;
}

const Vertex& FeynmanGraph::vertex(int id) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), id,
                             [](const Vertex& v, int key) { return v.id < key; });
  if (it == vertices_.end() || it->id != id) throw InputError("unknown vertex " + std::to_string(id));
  return *it;
}

std::size_t FeynmanGraph::n() const {
  return std::count_if(vertices_.begin(), vertices_.end(), [](const Vertex& v) { return v.kind == VertexKind::internal; });
}

std::size_t FeynmanGraph::N() const { return vertices_.size() - n(); }

bool FeynmanGraph::is_internal_line(std::size_t k) const {
  const Line& line = lines_.at(k);
  return vertex(line.from.vertex).kind == VertexKind::internal && vertex(line.to.vertex).kind == VertexKind::internal;
}

bool FeynmanGraph::is_tadpole(std::size_t k) const {
  const Line& line = lines_.at(k);
  return line.from.vertex == line.to.vertex;
}

std::size_t FeynmanGraph::tadpole_count() const {
  std::size_t t = 0;
  for (std::size_t k = 0; k < lines_.size(); ++k) t += is_tadpole(k);
  return t;
}

std::size_t FeynmanGraph::l() const {
  std::size_t count = 0;
  for (std::size_t k = 0; k < lines_.size(); ++k) count += is_internal_line(k);
  return count;
}

std::vector<int> FeynmanGraph::internal_ids() const {
  std::vector<int> ids;
  for (const auto& v : vertices_)
    if (v.kind == VertexKind::internal) ids.push_back(v.id);
  return ids;
}

std::vector<int> FeynmanGraph::external_ids() const {
  std::vector<int> ids;
  for (const auto& v : vertices_)
    if (v.kind == VertexKind::external) ids.push_back(v.id);
  return ids;
}

Skeleton FeynmanGraph::skeleton() const {
  Skeleton s;
  std::map<int, std::size_t> index;
  for (int id : internal_ids()) index.emplace(id, index.size());
  std::map<int, std::size_t> ext_index;
  for (int id : external_ids()) ext_index.emplace(id, ext_index.size());
  s.num_vertices = index.size();
  s.legs.assign(s.num_vertices, 0);
  s.legs_of.assign(s.num_vertices, {});
  for (const auto& line : lines_) {
    auto a = index.find(line.from.vertex);
    auto b = index.find(line.to.vertex);
    if (a != index.end() && b != index.end()) {
      s.edges.emplace_back(a->second, b->second);
    } else if (a != index.end()) {
      ++s.legs[a->second];
      s.legs_of[a->second].push_back(ext_index.at(line.to.vertex));
    } else if (b != index.end()) {
      ++s.legs[b->second];
      s.legs_of[b->second].push_back(ext_index.at(line.from.vertex));
    }
  }
  return s;
}

std::size_t FeynmanGraph::c() const {
  Skeleton s = skeleton();
  DisjointSets ds(s.num_vertices);
  std::size_t comps = s.num_vertices;
  for (auto [a, b] : s.edges) comps -= ds.unite(a, b);
  return comps;
}

long FeynmanGraph::loop_count() const {
  return static_cast<long>(l()) - static_cast<long>(n()) + static_cast<long>(c());
}

bool FeynmanGraph::connected() const {
  if (vertices_.empty()) return true;
  std::map<int, std::size_t> index;
  for (const auto& v : vertices_) index.emplace(v.id, index.size());
  DisjointSets ds(vertices_.size());
  std::size_t comps = vertices_.size();
  for (const auto& line : lines_) comps -= ds.unite(index.at(line.from.vertex), index.at(line.to.vertex));
  return comps == 1;
}

Matrix<Rational> FeynmanGraph::incidence_matrix() const {
  Skeleton s = skeleton();
  Matrix<Rational> eps(s.num_vertices, s.edges.size());
  for (std::size_t k = 0; k < s.edges.size(); ++k) {
    eps(s.edges[k].first, k) -= 1;
    eps(s.edges[k].second, k) += 1;
  }
  return eps;
}

ValidationReport validate(const FeynmanGraph& g, int required_degree) {
  ValidationReport rep;
  std::set<HalfEdge> used;
  for (const auto& line : g.lines()) {
    used.insert(line.from);
    used.insert(line.to);
  }
  for (const auto& v : g.vertices()) {
    int used_slots = 0;
    for (int s = 0; s < v.degree; ++s) {
      if (used.count({v.id, s})) ++used_slots;
      else rep.dangling.push_back({v.id, s});
    }
    const int required = v.kind == VertexKind::internal ? required_degree : 1;
    if (v.degree != required || used_slots != required) rep.degree_violations.push_back({v.id, used_slots, required});
  }
  rep.tadpoles = g.tadpole_count();

  std::map<int, std::size_t> index;
  for (const auto& v : g.vertices()) index.emplace(v.id, index.size());
  DisjointSets ds(g.vertices().size());
  for (const auto& line : g.lines()) ds.unite(index.at(line.from.vertex), index.at(line.to.vertex));
  std::map<std::size_t, std::vector<int>> groups;
  for (const auto& v : g.vertices()) groups[ds.find(index.at(v.id))].push_back(v.id);
  for (auto& [root, ids] : groups) rep.components.push_back(std::move(ids));
  return rep;
}

long loop_count(const FeynmanGraph& g) { return g.loop_count(); }

Rational superficial_degree(const FeynmanGraph& g, const Rational& d) {
  if (!g.connected())
    throw DomainError("superficial degree of divergence is defined for connected graphs only");
  Rational n(static_cast<long>(g.n()));
  Rational N(static_cast<long>(g.N()));
  Rational omega = (d - 4) * n + d - (d - 2) / 2 * N;
  omega.canonicalize();
  return omega;
}

Divergence classify(const Rational& omega) {
  if (omega < 0) return Divergence::convergent;
  if (omega == 0) return Divergence::logarithmic;
  if (omega == 1) return Divergence::linear;
  if (omega == 2) return Divergence::quadratic;
  return Divergence::worse;
}

std::string to_string(Divergence d) {
  switch (d) {
    case Divergence::convergent: return "convergent";
    case Divergence::logarithmic: return "logarithmic";
    case Divergence::linear: return "linear";
    case Divergence::quadratic: return "quadratic";
    case Divergence::worse: return "power>2";
  }
  return "?";
}

Subgraph make_subgraph(const FeynmanGraph& g, std::vector<std::size_t> line_indices) {
  std::sort(line_indices.begin(), line_indices.end());
  line_indices.erase(std::unique(line_indices.begin(), line_indices.end()), line_indices.end());
  Subgraph f;
  std::set<int> verts;
  for (std::size_t k : line_indices) {
    if (k >= g.lines().size()) throw InputError("subgraph line index out of range");
    if (!g.is_internal_line(k)) throw InputError("subgraphs are made of internal lines");
    verts.insert(g.lines()[k].from.vertex);
    verts.insert(g.lines()[k].to.vertex);
  }
  f.lines = std::move(line_indices);
  f.vertices.assign(verts.begin(), verts.end());
  std::size_t half_edges = 0;
  for (int id : f.vertices) half_edges += static_cast<std::size_t>(g.vertex(id).degree);
  f.external_half_lines = half_edges - 2 * f.lines.size();
  return f;
}

}  // namespace rgkit::graph
