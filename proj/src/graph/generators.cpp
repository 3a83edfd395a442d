#include "rgkit/graph/generators.hpp"

#include <algorithm>

#include "rgkit/errors.hpp"

namespace rgkit::graph {

FeynmanGraph from_skeleton(std::size_t n, const EdgeList& edges, int degree, bool fill_external) {
  std::vector<int> used(n, 0);
  std::vector<Line> lines;
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw InputError("skeleton edge references a missing vertex");
    HalfEdge a{static_cast<int>(u), used[u]++};
    HalfEdge b{static_cast<int>(v), used[v]++};
    lines.push_back({a, b});
  }
  std::vector<Vertex> vertices;
  for (std::size_t v = 0; v < n; ++v) {
    int slots = fill_external ? std::max(degree, used[v]) : used[v];
    vertices.push_back({static_cast<int>(v), VertexKind::internal, slots});
  }
  if (fill_external) {
    int next_id = static_cast<int>(n);
    for (std::size_t v = 0; v < n; ++v)
      for (int s = used[v]; s < vertices[v].degree; ++s) {
        vertices.push_back({next_id, VertexKind::external, 1});
        lines.push_back({{next_id, 0}, {static_cast<int>(v), s}});
        ++next_id;
      }
  }
  return FeynmanGraph(std::move(vertices), std::move(lines));
}

FeynmanGraph single_line() { return from_skeleton(2, {{0, 1}}); }
FeynmanGraph bubble() { return from_skeleton(2, {{0, 1}, {0, 1}}); }
FeynmanGraph triangle() { return from_skeleton(3, {{0, 1}, {1, 2}, {2, 0}}); }
FeynmanGraph complete_k4() { return from_skeleton(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}); }
FeynmanGraph double_tadpole() { return from_skeleton(1, {{0, 0}, {0, 0}}); }
FeynmanGraph sunset() { return from_skeleton(2, {{0, 1}, {0, 1}, {0, 1}}); }

FeynmanGraph named_graph(const std::string& name) {
  if (name == "single_line") return single_line();
  if (name == "bubble") return bubble();
  if (name == "triangle") return triangle();
  if (name == "k4") return complete_k4();
  if (name == "double_tadpole") return double_tadpole();
  if (name == "sunset") return sunset();
  throw InputError("unknown built-in graph '" + name + "'");
}

FeynmanGraph random_phi4_graph(std::size_t n, std::size_t N, std::mt19937_64& rng, bool require_connected) {
  if ((4 * n + N) % 2) throw InputError("4n + N must be even");
  std::vector<HalfEdge> fields;
  for (std::size_t v = 0; v < n; ++v)
    for (int s = 0; s < 4; ++s) fields.push_back({static_cast<int>(v), s});
  for (std::size_t e = 0; e < N; ++e) fields.push_back({static_cast<int>(n + e), 0});
  std::vector<Vertex> vertices;
  for (std::size_t v = 0; v < n; ++v) vertices.push_back({static_cast<int>(v), VertexKind::internal, 4});
  for (std::size_t e = 0; e < N; ++e) vertices.push_back({static_cast<int>(n + e), VertexKind::external, 1});
  for (int attempt = 0; attempt < 100000; ++attempt) {
    std::shuffle(fields.begin(), fields.end(), rng);
    std::vector<Line> lines;
    for (std::size_t k = 0; k + 1 < fields.size(); k += 2) lines.push_back({fields[k], fields[k + 1]});
    FeynmanGraph g(vertices, std::move(lines));
    if (!require_connected || g.connected()) return g;
  }
  throw GuardError("could not draw a connected graph for the requested (n, N)");
}

EdgeList random_connected_multigraph(std::size_t v, std::size_t e, std::mt19937_64& rng) {
  if (v == 0) throw InputError("need at least one vertex");
  if (e + 1 < v) throw InputError("too few edges to connect the vertices");
  if (v == 1 && e > 0) throw InputError("a loopless graph on one vertex has no edges");
  EdgeList edges;
  std::vector<std::size_t> order(v);
  for (std::size_t k = 0; k < v; ++k) order[k] = k;
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t k = 1; k < v; ++k) {
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    edges.emplace_back(order[pick(rng)], order[k]);
  }
  std::uniform_int_distribution<std::size_t> any(0, v - 1);
  while (edges.size() < e) {
    std::size_t a = any(rng), b = any(rng);
    if (a != b) edges.emplace_back(a, b);
  }
  return edges;
}

}  // namespace rgkit::graph
