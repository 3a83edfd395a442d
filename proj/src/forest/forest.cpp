#include "rgkit/forest/forest.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include "rgkit/errors.hpp"
#include "rgkit/numeric/quadrature.hpp"

namespace rgkit::forest {

namespace {

using Mask = std::uint64_t;

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

// Path masks over forest edge positions: mask[i][j] with bit k set if edge k lies on the i-j path.
struct PathTable {
  std::size_t n = 0;
  std::vector<Mask> mask;
  std::vector<bool> connected;
  Mask at(std::size_t i, std::size_t j) const { return mask[i * n + j]; }
  bool joined(std::size_t i, std::size_t j) const { return connected[i * n + j]; }
};

PathTable path_table(std::size_t n, const std::vector<Edge>& edges) {
  if (edges.size() > 63) throw GuardError("forest has more than 63 edges");
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(n);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    adj[edges[k].first].emplace_back(edges[k].second, k);
    adj[edges[k].second].emplace_back(edges[k].first, k);
  }
  PathTable t;
  t.n = n;
  t.mask.assign(n * n, 0);
  t.connected.assign(n * n, false);
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::size_t> stack{s};
    t.connected[s * n + s] = true;
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      for (auto [u, k] : adj[v]) {
        if (t.connected[s * n + u]) continue;
        t.connected[s * n + u] = true;
        t.mask[s * n + u] = t.mask[s * n + v] | (Mask(1) << k);
        stack.push_back(u);
      }
    }
  }
  return t;
}

void check_forest(std::size_t n, const std::vector<Edge>& edges) {
  Dsu d(n);
  for (auto [a, b] : edges) {
    if (a >= n || b >= n) throw InputError("forest edge endpoint out of range");
    if (!d.unite(a, b)) throw InputError("edge set contains a cycle (not a forest)");
  }
}

double min_over(Mask m, const std::vector<double>& w) {
  double v = 1.0;
  for (; m; m &= m - 1) v = std::min(v, w[static_cast<std::size_t>(std::countr_zero(m))]);
  return v;
}

// int_{[0,1]^m} prod_l min_{k in path_l} w_k via orderings of w: for an ascending order
// the integral factorizes into prod_i 1/(i + #paths touching the first i edges).
Rational exact_weight(std::size_t m, const std::vector<Mask>& paths) {
  if (m > 20) throw GuardError("exact weight limited to forests with at most 20 edges");
  const std::size_t states = std::size_t(1) << m;
  std::vector<Rational> f(states, Rational(0));
  f[0] = 1;
  for (std::size_t s = 0; s < states; ++s) {
    if (f[s] == 0) continue;
    const long placed = std::popcount(s);
    for (std::size_t k = 0; k < m; ++k) {
      if (s & (std::size_t(1) << k)) continue;
      const std::size_t next = s | (std::size_t(1) << k);
      long hit = 0;
      for (Mask p : paths) hit += (p & next) != 0;
      f[next] += f[s] / Rational(placed + 1 + hit);
    }
  }
  return f[states - 1];
}

Weight weight_from_paths(std::size_t m, const std::vector<Mask>& paths, const WeightOptions& opt) {
  std::vector<Mask> loops;
  for (Mask p : paths)
    if (p) loops.push_back(p);  // tadpoles contribute x = 1
  Weight w;
  bool exact = opt.method == Method::exact ||
               (opt.method == Method::automatic && loops.size() <= opt.exact_loop_limit);
  if (exact) {
    w.exact = true;
    w.exact_value = exact_weight(m, loops);
    w.value = to_double(w.exact_value);
    return w;
  }
  if (opt.samples < 2) throw InputError("Monte Carlo needs at least 2 samples");
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(m);
  double mean = 0.0, m2 = 0.0;
  for (std::size_t s = 0; s < opt.samples; ++s) {
    for (double& v : x) v = u(rng);
    double prod = 1.0;
    for (Mask p : loops) prod *= min_over(p, x);
    const double delta = prod - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (prod - mean);
  }
  const double var = m2 / static_cast<double>(opt.samples - 1);
  w.value = mean;
  w.samples = opt.samples;
  w.ci_half_width = 1.96 * std::sqrt(var / static_cast<double>(opt.samples));
  return w;
}

std::size_t component_count(const symanzik::Multigraph& g) {
  Dsu d(g.num_vertices);
  std::size_t c = g.num_vertices;
  for (auto [a, b] : g.edges) c -= d.unite(a, b);
  return c;
}

}  // namespace

bool is_forest(const Forest& f) {
  try {
    check_forest(f.n, f.edges);
    return true;
  } catch (const InputError&) {
    return false;
  }
}

Path forest_path(const Forest& f, std::size_t i, std::size_t j) {
  check_forest(f.n, f.edges);
  if (i >= f.n || j >= f.n) throw InputError("vertex out of range");
  PathTable t = path_table(f.n, f.edges);
  Path p;
  p.connected = t.joined(i, j);
  for (Mask m = t.at(i, j); m; m &= m - 1) p.edges.push_back(static_cast<std::size_t>(std::countr_zero(m)));
  return p;
}

namespace {
void check_weights(const Forest& f, const std::vector<double>& w) {
  if (w.size() != f.edges.size()) throw InputError("need one weakening parameter per forest edge");
  for (double v : w)
    if (!(v >= 0.0 && v <= 1.0)) throw InputError("weakening parameter outside [0,1]");
}
}  // namespace

double x_value(const Forest& f, const std::vector<double>& w, std::size_t i, std::size_t j) {
  check_weights(f, w);
  Path p = forest_path(f, i, j);
  if (i == j) return 1.0;
  if (!p.connected) return 0.0;
  double v = 1.0;
  for (std::size_t k : p.edges) v = std::min(v, w[k]);
  return v;
}

Matrix<double> x_matrix(const Forest& f, const std::vector<double>& w) {
  check_forest(f.n, f.edges);
  check_weights(f, w);
  PathTable t = path_table(f.n, f.edges);
  Matrix<double> x(f.n, f.n, 0.0);
  for (std::size_t i = 0; i < f.n; ++i)
    for (std::size_t j = 0; j < f.n; ++j) {
      if (i == j) x(i, j) = 1.0;
      else if (t.joined(i, j)) x(i, j) = min_over(t.at(i, j), w);
    }
  return x;
}

double min_eigenvalue(const Matrix<double>& m) {
  if (!m.square()) throw InputError("eigenvalues of a non-square matrix");
  if (m.rows() == 0) return 0.0;
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(static_cast<long>(i), static_cast<long>(j)) = m(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(e, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Weight forest_weight(const symanzik::Multigraph& g, const symanzik::LineSet& lines, const WeightOptions& opt) {
  std::vector<Edge> edges;
  std::vector<bool> in(g.edges.size(), false);
  for (std::size_t k : lines) {
    if (k >= g.edges.size()) throw InputError("forest line index out of range");
    if (in[k]) throw InputError("forest line repeated");
    in[k] = true;
    edges.push_back(g.edges[k]);
  }
  check_forest(g.num_vertices, edges);
  if (edges.size() + component_count(g) != g.num_vertices)
    throw InputError("line set is not a spanning forest of the graph");
  PathTable t = path_table(g.num_vertices, edges);
  std::vector<Mask> paths;
  for (std::size_t k = 0; k < g.edges.size(); ++k)
    if (!in[k]) paths.push_back(t.at(g.edges[k].first, g.edges[k].second));
  return weight_from_paths(edges.size(), paths, opt);
}

Weight tree_weight(const graph::FeynmanGraph& g, const symanzik::LineSet& tree, const WeightOptions& opt) {
  symanzik::Multigraph m = symanzik::Multigraph::from_graph(g);
  if (!m.connected()) throw InputError("tree weights need a connected graph");
  if (tree.size() + 1 != m.num_vertices) throw InputError("line set is not a spanning tree");
  return forest_weight(m, tree, opt);
}

BarycentricReport barycentric_check(const symanzik::Multigraph& g, const WeightOptions& opt) {
  BarycentricReport rep;
  Dsu d(g.num_vertices);
  for (auto [a, b] : g.edges) d.unite(a, b);

  // Components as sub-multigraphs with back-maps to the original line indices.
  std::vector<std::size_t> roots;
  for (std::size_t v = 0; v < g.num_vertices; ++v)
    if (d.find(v) == v) roots.push_back(v);
  struct Part {
    symanzik::Multigraph graph;
    std::vector<std::size_t> lines;
  };
  std::vector<Part> parts(roots.size());
  std::vector<std::size_t> local(g.num_vertices), owner(g.num_vertices);
  for (std::size_t c = 0; c < roots.size(); ++c)
    for (std::size_t v = 0; v < g.num_vertices; ++v)
      if (d.find(v) == roots[c]) {
        owner[v] = c;
        local[v] = parts[c].graph.num_vertices++;
      }
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    Part& p = parts[owner[g.edges[k].first]];
    p.graph.edges.emplace_back(local[g.edges[k].first], local[g.edges[k].second]);
    p.graph.variable.push_back(p.graph.num_variables++);
    p.lines.push_back(k);
  }

  // Each weight gets its own random stream so the per-tree errors are independent.
  std::uint64_t stream = 0;
  auto next_opt = [&] {
    WeightOptions o = opt;
    o.seed = opt.seed * 0x9E3779B97F4A7C15ull + ++stream;
    return o;
  };

  rep.exact = true;
  Rational exact_product(1);
  double product = 1.0, rel_var = 0.0;
  std::vector<std::vector<symanzik::LineSet>> part_trees;
  for (const Part& p : parts) {
    double sum = 0.0, var = 0.0;
    Rational esum(0);
    std::vector<symanzik::LineSet> mapped;
    for (const auto& t : symanzik::spanning_trees(p.graph)) {
      Weight w = forest_weight(p.graph, t, next_opt());
      sum += w.value;
      var += std::pow(w.ci_half_width, 2);
      if (w.exact) esum += w.exact_value;
      else rep.exact = false;
      symanzik::LineSet orig;
      for (std::size_t k : t) orig.push_back(p.lines[k]);
      mapped.push_back(std::move(orig));
    }
    rep.component_sums.push_back(sum);
    product *= sum;
    if (sum != 0.0) rel_var += var / (sum * sum);
    exact_product *= esum;
    part_trees.push_back(std::move(mapped));
  }
  rep.component_product = product;

  // Direct reading: every spanning forest (one tree per component) weighed on the whole graph.
  std::vector<std::size_t> pick(parts.size(), 0);
  double direct = 0.0, direct_var = 0.0;
  Rational direct_exact(0);
  while (true) {
    symanzik::LineSet f;
    for (std::size_t c = 0; c < parts.size(); ++c)
      f.insert(f.end(), part_trees[c][pick[c]].begin(), part_trees[c][pick[c]].end());
    std::sort(f.begin(), f.end());
    Weight w = forest_weight(g, f, next_opt());
    direct += w.value;
    direct_var += std::pow(w.ci_half_width, 2);
    if (w.exact) direct_exact += w.exact_value;
    rep.rows.push_back({std::move(f), w});
    std::size_t c = 0;
    while (c < parts.size() && ++pick[c] == part_trees[c].size()) pick[c++] = 0;
    if (c == parts.size()) break;
  }
  rep.forest_sum = direct;
  rep.ci_half_width = std::sqrt(direct_var);
  rep.component_ci_half_width = std::abs(product) * std::sqrt(rel_var);
  if (rep.exact) {
    rep.exact_sum = direct_exact;
    rep.exact_component_product = exact_product;
  }
  return rep;
}

BarycentricReport barycentric_check(const graph::FeynmanGraph& g, const WeightOptions& opt) {
  return barycentric_check(symanzik::Multigraph::from_graph(g), opt);
}

std::size_t pair_index(std::size_t n, std::size_t i, std::size_t j) {
  if (i == j || i >= n || j >= n) throw InputError("pair index needs two distinct points");
  if (i > j) std::swap(i, j);
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

std::vector<Forest> forests_of_complete_graph(std::size_t n) {
  if (n > 6) throw GuardError("forest enumeration on K_n limited to n <= 6");
  std::vector<Edge> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  std::vector<Forest> out;
  Forest cur{n, {}};
  std::function<void(std::size_t, Dsu)> rec = [&](std::size_t start, Dsu d) {
    out.push_back(cur);
    for (std::size_t k = start; k < pairs.size(); ++k) {
      Dsu next = d;
      if (!next.unite(pairs[k].first, pairs[k].second)) continue;
      cur.edges.push_back(pairs[k]);
      rec(k + 1, std::move(next));
      cur.edges.pop_back();
    }
  };
  rec(0, Dsu(n));
  return out;
}

double FormulaReport::relative_error() const {
  return std::abs(rhs - lhs) / std::max(std::abs(lhs), 1e-300);
}

namespace {

// int_{0<y_1<...<y_m<1} exp(sum b_i y_i) with y_m = t_m, y_k = y_{k+1} t_k.
double ordered_simplex_exp(const std::vector<double>& b, const quad::Rule& rule) {
  const std::size_t m = b.size();
  if (m == 0) return 1.0;
  std::function<double(std::size_t, double, double)> level = [&](std::size_t k, double y_above, double acc) {
    // k counts down from m-1; y_above is y_{k+2} (1 for the top level).
    double s = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double y = y_above * rule.nodes[q];
      const double jac = y_above;
      const double a = acc + b[k] * y;
      s += rule.weights[q] * jac * (k == 0 ? std::exp(a) : level(k - 1, y, a));
    }
    return s;
  };
  return level(m - 1, 1.0, 0.0);
}

}  // namespace

FormulaReport forest_formula_verify(std::size_t n, const std::vector<double>& c, std::size_t points) {
  if (n < 1) throw InputError("need at least one point");
  if (n > 5) throw GuardError("forest formula verification limited to n <= 5 (forest count explosion)");
  const std::size_t pairs = n * (n - 1) / 2;
  if (c.size() != pairs) throw InputError("need one coefficient per pair (" + std::to_string(pairs) + ")");
  if (points < 2) throw InputError("quadrature needs at least 2 nodes per axis");
  const quad::Rule rule = quad::composite_gauss_legendre(0.0, 1.0, 1, points);

  FormulaReport rep;
  double total = 0.0;
  for (double v : c) total += v;
  rep.lhs = std::exp(total);

  for (const Forest& f : forests_of_complete_graph(n)) {
    ++rep.forests;
    const std::size_t m = f.edges.size();
    double deriv = 1.0;
    for (auto [a, b] : f.edges) deriv *= c[pair_index(n, a, b)];
    if (deriv == 0.0) continue;
    PathTable t = path_table(n, f.edges);
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::size_t> rank(m);
    double integral = 0.0;
    do {
      for (std::size_t r = 0; r < m; ++r) rank[order[r]] = r;
      std::vector<double> b(m, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
          if (!t.joined(i, j)) continue;
          std::size_t lowest = m;
          for (Mask p = t.at(i, j); p; p &= p - 1)
            lowest = std::min(lowest, rank[static_cast<std::size_t>(std::countr_zero(p))]);
          b[lowest] += c[pair_index(n, i, j)];
        }
      integral += ordered_simplex_exp(b, rule);
    } while (std::next_permutation(order.begin(), order.end()));
    rep.rhs += deriv * integral;
  }
  return rep;
}

Rational path_min_integral(std::size_t edges, const std::vector<std::uint64_t>& paths) {
  return exact_weight(edges, paths);
}

}  // namespace rgkit::forest
