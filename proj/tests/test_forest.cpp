#include <doctest.h>

#include <cmath>
#include <random>

#include "rgkit/errors.hpp"
#include "rgkit/forest/forest.hpp"
#include "rgkit/graph/generators.hpp"
#include "rgkit/symanzik/symanzik.hpp"

using namespace rgkit;
using namespace rgkit::forest;

namespace {

symanzik::Multigraph multigraph(std::size_t v, const graph::EdgeList& edges) {
  symanzik::Multigraph g;
  g.num_vertices = v;
  g.edges = edges;
  g.variable.resize(edges.size());
  std::iota(g.variable.begin(), g.variable.end(), 0);
  g.num_variables = edges.size();
  return g;
}

Forest random_forest(std::size_t n, std::mt19937_64& rng) {
  // random recursive tree, then drop each edge with probability 1/3
  Forest f{n, {}};
  for (std::size_t v = 1; v < n; ++v)
    if (rng() % 3) f.edges.emplace_back(rng() % v, v);
  return f;
}

}  // namespace

TEST_CASE("x matrices") {
  Forest empty{3, {}};
  auto X0 = x_matrix(empty, {});
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(X0(i, j) == (i == j ? 1.0 : 0.0));

  Forest one{2, {{0, 1}}};
  auto X1 = x_matrix(one, {1.0});
  CHECK(X1(0, 1) == 1.0);
  CHECK(min_eigenvalue(X1) > -1e-12);

  Forest path{3, {{0, 1}, {1, 2}}};
  auto X = x_matrix(path, {0.3, 0.8});
  CHECK(X(0, 2) == 0.3);
  CHECK(X(1, 2) == 0.8);
  CHECK(min_eigenvalue(X) > -1e-12);
  CHECK_THROWS_AS(x_matrix(Forest{3, {{0, 1}, {1, 2}, {2, 0}}}, {1, 1, 1}), InputError);
}

TEST_CASE("tree weights in closed form") {
  auto one = graph::single_line();
  auto w1 = tree_weight(one, {0});
  CHECK(w1.exact);
  CHECK(w1.exact_value == 1);

  auto b = graph::bubble();
  auto wb = tree_weight(b, {0});
  CHECK(wb.exact_value == Rational(1, 2));

  auto t = graph::triangle();
  for (const auto& tree : symanzik::spanning_trees(t)) CHECK(tree_weight(t, tree).exact_value == Rational(1, 3));
}

TEST_CASE("barycentric identity on standard graphs") {
  for (auto name : {"single_line", "bubble", "triangle", "k4", "sunset"}) {
    auto r = barycentric_check(graph::named_graph(name));
    CHECK(r.exact);
    CHECK(r.exact_sum == 1);
  }
}

TEST_CASE("path-min integrals") {
  CHECK(path_min_integral(1, {0b1}) == Rational(1, 2));
  CHECK(path_min_integral(2, {0b11}) == Rational(1, 3));
  CHECK(path_min_integral(1, {0b1, 0b1}) == Rational(1, 3));
  CHECK(path_min_integral(2, {0b01, 0b10}) == Rational(1, 4));
  CHECK(path_min_integral(3, {}) == 1);
  CHECK(path_min_integral(3, {0}) == 1);
}

TEST_CASE("forest formula closed cases") {
  auto r2 = forest_formula_verify(2, {0.7});
  CHECK(r2.forests == 2);
  CHECK(r2.lhs == doctest::Approx(std::exp(0.7)));
  CHECK(r2.relative_error() < 1e-10);
  auto r3 = forest_formula_verify(3, {0, 0, 0});
  CHECK(r3.lhs == doctest::Approx(1.0));
  CHECK(r3.rhs == doctest::Approx(1.0));
}

TEST_CASE("property: forest formula on random exponential test functions") {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(-1, 1);
  for (std::size_t n : {2u, 3u, 4u})
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<double> c(n * (n - 1) / 2);
      for (auto& x : c) x = u(rng);
      CHECK(forest_formula_verify(n, c).relative_error() < 1e-6);
    }
}

TEST_CASE("property: x at w = 1 is one on connected pairs, X is PSD") {
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t n = 2 + rng() % 6;
    auto f = random_forest(n, rng);
    std::vector<double> ones(f.edges.size(), 1.0), w(f.edges.size());
    for (auto& x : w) x = u(rng);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double x1 = x_value(f, ones, i, j);
        CHECK(x1 == (forest_path(f, i, j).connected ? 1.0 : 0.0));
        double x = x_value(f, w, i, j);
        CHECK(x >= 0.0);
        CHECK(x <= 1.0);
      }
    CHECK(min_eigenvalue(x_matrix(f, w)) > -1e-10);
  }
}

TEST_CASE("property: weights multiply over disjoint unions") {
  auto g = multigraph(5, {{0, 1}, {0, 1}, {2, 3}, {3, 4}, {4, 2}});
  // forest {line 0} + {lines 2, 3}
  auto w = forest_weight(g, {0, 2, 3});
  CHECK(w.exact);
  CHECK(w.exact_value == Rational(1, 2) * Rational(1, 3));
  auto r = barycentric_check(g);
  CHECK(r.exact_sum == 1);
  CHECK(r.exact_component_product == 1);
}

TEST_CASE("property: barycentric identity on random graphs, exact and Monte Carlo") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    std::size_t v = 2 + rng() % 3;
    std::size_t e = v + rng() % (6 - v);
    auto g = multigraph(v, graph::random_connected_multigraph(v, e, rng));
    WeightOptions ex;
    ex.method = Method::exact;
    auto r = barycentric_check(g, ex);
    CHECK(r.exact);
    CHECK(r.exact_sum == 1);

    WeightOptions mc;
    mc.method = Method::monte_carlo;
    mc.samples = 20000;
    mc.seed = 100 + static_cast<std::uint64_t>(trial);
    auto m = barycentric_check(g, mc);
    CHECK(std::abs(m.forest_sum - 1.0) <= m.ci_half_width + 1e-12);
  }
}
