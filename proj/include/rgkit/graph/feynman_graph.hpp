#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "rgkit/numeric/matrix.hpp"
#include "rgkit/numeric/rational.hpp"

namespace rgkit::graph {

enum class VertexKind { internal, external };

struct Vertex {
  int id = 0;
  VertexKind kind = VertexKind::internal;
  int degree = 4;  // number of half-edge slots owned by the vertex
  bool operator==(const Vertex&) const = default;
};

struct HalfEdge {
  int vertex = 0;
  int slot = 0;
  auto operator<=>(const HalfEdge&) const = default;
};

// An oriented line from b(l) = from to e(l) = to.
struct Line {
  HalfEdge from;
  HalfEdge to;
  auto operator<=>(const Line&) const = default;
};

// Internal-vertex skeleton: vertices 0..n-1 (internal vertices by increasing id),
// edges are the internal lines in canonical order, legs[v] = external legs at v.
struct Skeleton {
  std::size_t num_vertices = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<int> legs;
  // legs_of[v] = indices (into the graph's external-vertex list) of legs hooked to v.
  std::vector<std::vector<std::size_t>> legs_of;
};

struct DegreeViolation {
  int vertex = 0;
  int used = 0;
  int required = 0;
};

struct ValidationReport {
  std::vector<DegreeViolation> degree_violations;
  std::vector<HalfEdge> dangling;
  std::size_t tadpoles = 0;
  std::vector<std::vector<int>> components;  // vertex ids, internal and external
  bool valid() const { return degree_violations.empty() && dangling.empty(); }
};

class FeynmanGraph {
 public:
  FeynmanGraph() = default;
  // Throws InputError on malformed half-edge references; stores lines in canonical order.
  FeynmanGraph(std::vector<Vertex> vertices, std::vector<Line> lines);

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Line>& lines() const { return lines_; }
  const Vertex& vertex(int id) const;
  bool has_vertex(int id) const;

  std::size_t n() const;  // internal vertices
  std::size_t N() const;  // external one-legged vertices
  std::size_t l() const;  // internal lines (both ends internal)
  std::size_t c() const;  // connected components of the internal skeleton
  long loop_count() const;  // L = l - n + c
  bool connected() const;   // whole graph, externals included
  bool is_internal_line(std::size_t k) const;
  bool is_tadpole(std::size_t k) const;
  std::size_t tadpole_count() const;

  std::vector<int> internal_ids() const;
  std::vector<int> external_ids() const;

  Skeleton skeleton() const;

  // rows = internal vertices (skeleton order), columns = internal lines:
  // +1 where the line enters the vertex, -1 where it exits, sum of both for tadpoles.
  Matrix<Rational> incidence_matrix() const;

  bool operator==(const FeynmanGraph& o) const { return vertices_ == o.vertices_ && lines_ == o.lines_; }

 private:
  std::vector<Vertex> vertices_;
  std::vector<Line> lines_;
};

ValidationReport validate(const FeynmanGraph& g, int required_degree = 4);

long loop_count(const FeynmanGraph& g);

// omega(G) = (d-4) n + d - ((d-2)/2) N for connected phi^4 graphs; DomainError if disconnected.
Rational superficial_degree(const FeynmanGraph& g, const Rational& d);

enum class Divergence { convergent, logarithmic, linear, quadratic, worse };
Divergence classify(const Rational& omega);
std::string to_string(Divergence d);

struct Subgraph {
  std::vector<std::size_t> lines;  // indices into the parent's line list (internal lines only)
  std::vector<int> vertices;       // internal vertex ids touched by those lines
  std::size_t external_half_lines = 0;  // N(F)
  std::size_t n() const { return vertices.size(); }
  std::size_t l() const { return lines.size(); }
};

Subgraph make_subgraph(const FeynmanGraph& g, std::vector<std::size_t> line_indices);

}  // namespace rgkit::graph
