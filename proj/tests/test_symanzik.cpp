#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "rgkit/errors.hpp"
#include "rgkit/graph/generators.hpp"
#include "rgkit/rgflow/rgflow.hpp"
#include "rgkit/symanzik/symanzik.hpp"

using namespace rgkit;
using namespace rgkit::symanzik;

namespace {

Multigraph multigraph(std::size_t v, const graph::EdgeList& edges) {
  Multigraph g;
  g.num_vertices = v;
  g.edges = edges;
  g.variable.resize(edges.size());
  std::iota(g.variable.begin(), g.variable.end(), 0);
  g.num_variables = edges.size();
  return g;
}

// (2pi)^{-2d} int d^dk / ((k^2+m^2)((k+p)^2+m^2)) via Feynman parameters.
double bubble_oracle(double d, double m2, double p2) {
  const double pi = std::numbers::pi;
  double x_int = oracle::simpson([&](double x) { return std::pow(m2 + x * (1 - x) * p2, d / 2 - 2); }, 0.0, 1.0, 2000);
  return std::pow(2 * pi, -2 * d) * std::pow(pi, d / 2) * std::tgamma(2 - d / 2) * x_int;
}

}  // namespace

TEST_CASE("spanning tree counts") {
  CHECK(spanning_trees(graph::bubble()).size() == 2);
  CHECK(spanning_trees(graph::complete_k4()).size() == 16);
  CHECK(spanning_trees(graph::triangle()).size() == 3);
  CHECK(kirchhoff_tree_count(Multigraph::from_graph(graph::triangle())) == 3);
  CHECK(kirchhoff_tree_count(Multigraph::from_graph(graph::complete_k4())) == 16);
  CHECK_THROWS_AS(spanning_trees(graph::from_skeleton(4, {{0, 1}, {2, 3}})), InputError);
}

TEST_CASE("first Symanzik polynomial examples") {
  auto U = first_symanzik(graph::bubble());
  CHECK(U.to_string() == "a2 + a1");
  CHECK(first_symanzik(graph::single_line()).to_string() == "1");
  auto Ut = first_symanzik(graph::triangle());
  CHECK(Ut.size() == 3);
  CHECK(Ut.homogeneous_degree() == 1);
  CHECK_THROWS_AS(first_symanzik(graph::double_tadpole()), InputError);
}

TEST_CASE("second Symanzik polynomial of the bubble") {
  auto g = Multigraph::from_graph(graph::bubble());
  auto V = second_symanzik(g, {{0.7, 0.0}, {-0.7, 0.0}});
  REQUIRE(V.size() == 1);
  CHECK(V.terms().begin()->first == Exponents{1, 1});
  CHECK(V.terms().begin()->second == doctest::Approx(0.49));
  CHECK(second_symanzik(g, {{0.0}, {0.0}}).is_zero());
  CHECK_THROWS_AS(second_symanzik(g, {{1.0}, {0.5}}), InputError);
}

TEST_CASE("two-forests split the momentum evenly") {
  auto g = Multigraph::from_graph(graph::complete_k4());
  std::vector<std::vector<double>> p{{1.0, 0.2}, {-0.3, 0.5}, {0.4, -1.1}, {-1.1, 0.4}};
  for (const auto& f : spanning_two_forests(g)) {
    double a[2] = {0, 0}, b[2] = {0, 0};
    bool seen_first = false, seen_second = false;
    for (std::size_t v = 0; v < 4; ++v) {
      double* t = f.in_first[v] ? a : b;
      (f.in_first[v] ? seen_first : seen_second) = true;
      t[0] += p[v][0];
      t[1] += p[v][1];
    }
    CHECK(seen_first);
    CHECK(seen_second);
    CHECK(f.lines.size() == 2);
    CHECK(a[0] * a[0] + a[1] * a[1] == doctest::Approx(b[0] * b[0] + b[1] * b[1]));
  }
}

TEST_CASE("tree matrix theorem anchors") {
  Rational a(3, 2), b(5, 7);
  TreeMatrixReport r = tree_matrix_check(Matrix<Rational>{{a, -b}, {-a, b}});
  CHECK(r.minor_det == b);
  CHECK(r.equal());
  Matrix<Rational> L{{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}};
  auto t = tree_matrix_check(L);
  CHECK(t.minor_det == 3);
  CHECK(t.tree_sum == 3);
  CHECK(tree_matrix_check(Matrix<Rational>{{0}}).minor_det == 1);
  CHECK_THROWS_AS(tree_matrix_check(Matrix<Rational>{{1, 0}, {0, 1}}), InputError);
}

TEST_CASE("bubble amplitude against the momentum-space oracle") {
  auto g = Multigraph::from_graph(graph::bubble());
  for (double d : {1.0, 2.0, 3.0})
    for (double p : {0.0, 1.3}) {
      AmplitudeParams prm;
      prm.d = d;
      prm.rel_tol = 1e-9;
      auto res = parametric_amplitude(g, {{p}, {-p}}, prm);
      CHECK(res.value == doctest::Approx(bubble_oracle(d, 1.0, p * p)).epsilon(1e-6));
    }
}

TEST_CASE("regulated tadpole equals the cutoff propagator at coincident points") {
  // The one-loop tadpole has U = alpha, so its integrand is e^{-m^2 alpha} alpha^{-d/2}.
  auto tad = multigraph(1, {{0, 0}});
  for (double d : {3.0, 4.0}) {
    AmplitudeParams prm;
    prm.d = d;
    prm.alpha_min = 0.05;
    prm.normalized = false;
    rgflow::SliceParams sp;
    sp.d = d;
    CHECK(parametric_amplitude(tad, {{0.0}}, prm).value ==
          doctest::Approx(rgflow::cutoff_propagator(0.0, 0.05, sp)).epsilon(1e-7));
  }
  AmplitudeParams prm;
  prm.d = 4.0;
  CHECK_THROWS_AS(parametric_amplitude(tad, {{0.0}}, prm), DomainError);
}

TEST_CASE("homogeneity: rescaling alpha trades against the mass") {
  auto g = Multigraph::from_graph(graph::bubble());
  AmplitudeParams prm;
  prm.d = 2.0;
  prm.rel_tol = 1e-10;
  double a1 = parametric_amplitude(g, {{0.0}, {0.0}}, prm).value;
  prm.m2 = 0.5;
  double a2 = parametric_amplitude(g, {{0.0}, {0.0}}, prm).value;
  // A(m^2/s) = s^{l - dL/2} A(m^2) with l = 2, L = 1, d = 2
  CHECK(a2 == doctest::Approx(2.0 * a1).epsilon(1e-7));
}

TEST_CASE("property: Kirchhoff, subset oracle and tree enumeration agree") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t v = 2 + rng() % 4;
    std::size_t e = v - 1 + rng() % (7 - v + 1);
    auto edges = graph::random_connected_multigraph(v, e, rng);
    auto g = multigraph(v, edges);
    auto trees = spanning_trees(g);
    CHECK(BigInt(trees.size()) == kirchhoff_tree_count(g));
    CHECK(trees.size() == oracle::spanning_trees_by_subsets(v, edges));
  }
}

TEST_CASE("property: deletion-contraction, unit coefficients, homogeneity") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 80; ++trial) {
    std::size_t v = 2 + rng() % 4;
    std::size_t e = v - 1 + rng() % (7 - v);
    auto g = multigraph(v, graph::random_connected_multigraph(v, e, rng));
    if (g.edges.size() > 6) continue;
    auto U = spanning_tree_polynomial(g);
    const long L = static_cast<long>(e) - static_cast<long>(v) + 1;
    CHECK(U.homogeneous_degree() == L);
    for (const auto& [ex, c] : U.terms()) CHECK(c == 1);
    for (std::size_t k = 0; k < g.edges.size(); ++k) CHECK(deletion_contraction_holds(g, k));

    std::vector<std::vector<double>> p(v, std::vector<double>(2));
    std::uniform_real_distribution<double> u(-1, 1);
    for (std::size_t i = 0; i + 1 < v; ++i) {
      p[i] = {u(rng), u(rng)};
      p[v - 1][0] -= p[i][0];
      p[v - 1][1] -= p[i][1];
    }
    auto V = second_symanzik(g, p);
    if (!V.is_zero()) CHECK(V.homogeneous_degree() == L + 1);
  }
}

TEST_CASE("property: tree matrix theorem on random zero-column-sum matrices") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 1 + rng() % 5;
    Matrix<Rational> A(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      Rational col(0);
      for (std::size_t i = 0; i < n; ++i)
        if (i != j) {
          A(i, j) = oracle::random_rational(rng);
          col += A(i, j);
        }
      A(j, j) = -col;
    }
    auto r = tree_matrix_check(A);
    CHECK(r.equal());
    CHECK(r.tree_sum == oracle::directed_tree_sum(A));
    if (n > 1) {
      std::vector<std::size_t> rest(n - 1);
      std::iota(rest.begin(), rest.end(), 1);
      CHECK(r.minor_det == oracle::leibniz_det(A.select(rest, rest)));
    }
  }
}
