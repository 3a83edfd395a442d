#include "rgkit/symanzik/symanzik.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rgkit/errors.hpp"

namespace rgkit::symanzik {

namespace {

struct Dsu {
  std::vector<std::size_t> p;
  explicit Dsu(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  std::size_t find(std::size_t x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    p[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

// All acyclic edge subsets of the given size (forests with n - size components).
void forests_of_size(const Multigraph& g, std::size_t size, std::size_t start, Dsu dsu, LineSet& current,
                     std::vector<LineSet>& out) {
  if (current.size() == size) {
    out.push_back(current);
    return;
  }
  for (std::size_t k = start; k < g.edges.size(); ++k) {
    if (g.edges.size() - k < size - current.size()) break;
    if (g.is_tadpole(k)) continue;
    Dsu next = dsu;
    if (!next.unite(g.edges[k].first, g.edges[k].second)) continue;
    current.push_back(k);
    forests_of_size(g, size, k + 1, std::move(next), current, out);
    current.pop_back();
  }
}

std::vector<LineSet> forests_with_components(const Multigraph& g, std::size_t components) {
  std::vector<LineSet> out;
  if (g.num_vertices < components) return out;
  LineSet current;
  forests_of_size(g, g.num_vertices - components, 0, Dsu(g.num_vertices), current, out);
  return out;
}

Exponents complement_monomial(const Multigraph& g, const LineSet& kept) {
  Exponents e(g.num_variables, 0);
  std::vector<bool> in(g.edges.size(), false);
  for (std::size_t k : kept) in[k] = true;
  for (std::size_t k = 0; k < g.edges.size(); ++k)
    if (!in[k]) e[g.variable[k]] += 1;
  return e;
}

}  // namespace

Multigraph Multigraph::from_graph(const graph::FeynmanGraph& g) {
  graph::Skeleton s = g.skeleton();
  Multigraph m;
  m.num_vertices = s.num_vertices;
  m.edges = s.edges;
  m.variable.resize(m.edges.size());
  std::iota(m.variable.begin(), m.variable.end(), 0);
  m.num_variables = m.edges.size();
  return m;
}

bool Multigraph::connected() const {
  if (num_vertices == 0) return true;
  Dsu d(num_vertices);
  std::size_t comps = num_vertices;
  for (auto [a, b] : edges) comps -= d.unite(a, b);
  return comps == 1;
}

bool Multigraph::is_bridge(std::size_t k) const {
  if (is_tadpole(k)) return false;
  return connected() && !deleted(k).connected();
}

Multigraph Multigraph::deleted(std::size_t k) const {
  if (k >= edges.size()) throw InputError("edge index out of range");
  Multigraph m = *this;
  m.edges.erase(m.edges.begin() + static_cast<long>(k));
  m.variable.erase(m.variable.begin() + static_cast<long>(k));
  return m;
}

Multigraph Multigraph::contracted(std::size_t k) const {
  if (k >= edges.size()) throw InputError("edge index out of range");
  if (is_tadpole(k)) throw InputError("cannot contract a tadpole line");
  const std::size_t keep = std::min(edges[k].first, edges[k].second);
  const std::size_t gone = std::max(edges[k].first, edges[k].second);
  auto relabel = [&](std::size_t v) {
    if (v == gone) v = keep;
    return v > gone ? v - 1 : v;
  };
  Multigraph m;
  m.num_vertices = num_vertices - 1;
  m.num_variables = num_variables;
  for (std::size_t j = 0; j < edges.size(); ++j) {
    if (j == k) continue;
    m.edges.emplace_back(relabel(edges[j].first), relabel(edges[j].second));
    m.variable.push_back(variable[j]);
  }
  return m;
}

std::vector<LineSet> spanning_trees(const Multigraph& g) {
  if (!g.connected()) return {};
  return forests_with_components(g, 1);
}

std::vector<LineSet> spanning_trees(const graph::FeynmanGraph& g) {
  Multigraph m = Multigraph::from_graph(g);
  if (!m.connected()) throw InputError("spanning trees need a connected graph");
  return spanning_trees(m);
}

BigInt kirchhoff_tree_count(const Multigraph& g) {
  const std::size_t n = g.num_vertices;
  if (n == 0) return 0;
  Matrix<BigInt> lap(n, n, BigInt(0));
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    if (g.is_tadpole(k)) continue;
    auto [a, b] = g.edges[k];
    lap(a, a) += 1;
    lap(b, b) += 1;
    lap(a, b) -= 1;
    lap(b, a) -= 1;
  }
  return bareiss_determinant(lap.without(0, 0));
}

AlphaPolynomial spanning_tree_polynomial(const Multigraph& g) {
  AlphaPolynomial u(g.num_variables);
  for (const auto& tree : spanning_trees(g)) u.add_term(complement_monomial(g, tree), BigInt(1));
  return u;
}

AlphaPolynomial first_symanzik(const graph::FeynmanGraph& g) {
  Multigraph m = Multigraph::from_graph(g);
  if (!m.connected()) throw InputError("first Symanzik polynomial needs a connected graph");
  for (std::size_t k = 0; k < m.edges.size(); ++k)
    if (m.is_tadpole(k))
      throw InputError("tadpole line present: the incidence-matrix construction is restricted to tadpole-free graphs");
  return spanning_tree_polynomial(m);
}

std::vector<TwoForest> spanning_two_forests(const Multigraph& g) {
  std::vector<TwoForest> out;
  if (!g.connected()) return out;
  for (auto& lines : forests_with_components(g, 2)) {
    Dsu d(g.num_vertices);
    for (std::size_t k : lines) d.unite(g.edges[k].first, g.edges[k].second);
    TwoForest f;
    f.in_first.resize(g.num_vertices);
    for (std::size_t v = 0; v < g.num_vertices; ++v) f.in_first[v] = d.find(v) == d.find(0);
    f.lines = std::move(lines);
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<std::vector<double>> vertex_momenta(const graph::FeynmanGraph& g,
                                                const std::vector<std::vector<double>>& external_momenta) {
  graph::Skeleton s = g.skeleton();
  if (external_momenta.empty()) return std::vector<std::vector<double>>(s.num_vertices);
  if (external_momenta.size() != g.N())
    throw InputError("expected one momentum per external leg (" + std::to_string(g.N()) + ")");
  std::size_t dim = external_momenta.empty() ? 0 : external_momenta[0].size();
  for (const auto& p : external_momenta)
    if (p.size() != dim) throw InputError("external momenta must share one dimension");
  std::vector<std::vector<double>> out(s.num_vertices, std::vector<double>(dim, 0.0));
  for (std::size_t v = 0; v < s.num_vertices; ++v)
    for (std::size_t e : s.legs_of[v])
      for (std::size_t a = 0; a < dim; ++a) out[v][a] += external_momenta[e][a];
  return out;
}

Polynomial<double> second_symanzik(const Multigraph& g, const std::vector<std::vector<double>>& vertex_p,
                                   double conservation_tol) {
  if (vertex_p.size() != g.num_vertices) throw InputError("need one momentum per skeleton vertex");
  if (!g.connected()) throw InputError("second Symanzik polynomial needs a connected graph");
  const std::size_t dim = vertex_p.empty() ? 0 : vertex_p[0].size();
  std::vector<double> total(dim, 0.0);
  double scale = 0.0;
  for (const auto& p : vertex_p) {
    if (p.size() != dim) throw InputError("momenta must share one dimension");
    for (std::size_t a = 0; a < dim; ++a) {
      total[a] += p[a];
      scale = std::max(scale, std::abs(p[a]));
    }
  }
  for (double t : total)
    if (std::abs(t) > conservation_tol * std::max(1.0, scale))
      throw InputError("external momenta are not conserved (sum p != 0)");
  Polynomial<double> v(g.num_variables);
  for (const auto& f : spanning_two_forests(g)) {
    std::vector<double> pe(dim, 0.0);
    for (std::size_t u = 0; u < g.num_vertices; ++u)
      if (f.in_first[u])
        for (std::size_t a = 0; a < dim; ++a) pe[a] += vertex_p[u][a];
    double p2 = 0.0;
    for (double x : pe) p2 += x * x;
    if (p2 != 0.0) v.add_term(complement_monomial(g, f.lines), p2);
  }
  return v;
}

Polynomial<double> second_symanzik(const graph::FeynmanGraph& g, const std::vector<std::vector<double>>& external_momenta,
                                   double conservation_tol) {
  return second_symanzik(Multigraph::from_graph(g), vertex_momenta(g, external_momenta), conservation_tol);
}

bool deletion_contraction_holds(const Multigraph& g, std::size_t line) {
  if (line >= g.edges.size()) throw InputError("edge index out of range");
  if (g.is_tadpole(line)) throw InputError("deletion-contraction is stated for non-tadpole lines");
  AlphaPolynomial lhs = spanning_tree_polynomial(g);
  AlphaPolynomial alpha = AlphaPolynomial::variable(g.num_variables, g.variable[line]);
  AlphaPolynomial rhs = alpha * spanning_tree_polynomial(g.deleted(line)) + spanning_tree_polynomial(g.contracted(line));
  return lhs == rhs;
}

TreeMatrixReport tree_matrix_check(const Matrix<Rational>& A) {
  if (!A.square()) throw InputError("tree matrix theorem needs a square matrix");
  const std::size_t n = A.rows();
  if (n == 0) throw InputError("empty matrix");
  if (n > 9) throw GuardError("directed-tree enumeration limited to n <= 9");
  for (std::size_t j = 0; j < n; ++j) {
    Rational col(0);
    for (std::size_t i = 0; i < n; ++i) col += A(i, j);
    if (col != 0) throw InputError("column " + std::to_string(j + 1) + " does not sum to zero");
  }
  TreeMatrixReport rep;
  rep.minor_det = determinant(A.without(0, 0));
  rep.tree_sum = 0;
  // parent[v] for v = 1..n-1; a parent function is a tree iff every vertex reaches the root.
  std::vector<std::size_t> parent(n, 0);
  const std::size_t m = n - 1;
  if (m == 0) {
    rep.tree_sum = 1;
    rep.trees = 1;
    return rep;
  }
  std::vector<std::size_t> digits(m, 0);
  while (true) {
    for (std::size_t k = 0; k < m; ++k) {
      std::size_t v = k + 1;
      std::size_t p = digits[k];
      parent[v] = p >= v ? p + 1 : p;  // skip self
    }
    bool tree = true;
    for (std::size_t v = 1; v < n && tree; ++v) {
      std::size_t cur = v;
      for (std::size_t steps = 0; steps <= n && cur != 0; ++steps) cur = parent[cur];
      if (cur != 0) tree = false;
    }
    if (tree) {
      Rational prod(1);
      for (std::size_t v = 1; v < n; ++v) prod *= -A(parent[v], v);
      rep.tree_sum += prod;
      ++rep.trees;
    }
    std::size_t k = 0;
    while (k < m && ++digits[k] == m) digits[k++] = 0;
    if (k == m) break;
  }
  return rep;
}

}  // namespace rgkit::symanzik
