#include <doctest.h>

#include <random>
#include <set>

#include "rgkit/errors.hpp"
#include "rgkit/graph/feynman_graph.hpp"
#include "rgkit/graph/generators.hpp"
#include "rgkit/graph/graph_json.hpp"

using namespace rgkit;
using namespace rgkit::graph;

TEST_CASE("double tadpole is valid with two tadpoles") {
  auto g = double_tadpole();
  auto r = validate(g);
  CHECK(r.valid());
  CHECK(r.tadpoles == 2);
  CHECK(g.tadpole_count() == 2);
  CHECK(g.loop_count() == 2);
}

TEST_CASE("bubble: valid, connected, one loop") {
  auto g = bubble();
  CHECK(validate(g).valid());
  CHECK(g.n() == 2);
  CHECK(g.N() == 4);
  CHECK(g.l() == 2);
  CHECK(g.c() == 1);
  CHECK(loop_count(g) == 1);
}

TEST_CASE("three half-edges at a quartic vertex is a degree violation") {
  FeynmanGraph g({{0, VertexKind::internal, 3}, {1, VertexKind::external, 1}, {2, VertexKind::external, 1},
                  {3, VertexKind::external, 1}},
                 {{{0, 0}, {1, 0}}, {{0, 1}, {2, 0}}, {{0, 2}, {3, 0}}});
  auto r = validate(g);
  CHECK_FALSE(r.valid());
  REQUIRE(r.degree_violations.size() == 1);
  CHECK(r.degree_violations[0].vertex == 0);
  CHECK(r.degree_violations[0].used == 3);
}

TEST_CASE("malformed half-edge references are rejected") {
  CHECK_THROWS_AS(FeynmanGraph({{0, VertexKind::internal, 4}}, {{{0, 0}, {7, 0}}}), InputError);
  CHECK_THROWS_AS(FeynmanGraph({{0, VertexKind::internal, 4}}, {{{0, 9}, {0, 1}}}), InputError);
  CHECK_THROWS_AS(FeynmanGraph({{0, VertexKind::internal, 4}}, {{{0, 0}, {0, 1}}, {{0, 1}, {0, 2}}}), InputError);
}

TEST_CASE("trees have no loops, disjoint bubbles have two") {
  auto path = from_skeleton(3, {{0, 1}, {1, 2}});
  CHECK(path.l() == 2);
  CHECK(loop_count(path) == 0);

  auto two = from_skeleton(4, {{0, 1}, {0, 1}, {2, 3}, {2, 3}});
  CHECK(two.c() == 2);
  CHECK(loop_count(two) == 2);
  CHECK_FALSE(two.connected());
  CHECK_THROWS_AS(superficial_degree(two, Rational(4)), DomainError);
}

TEST_CASE("superficial degree closed forms") {
  for (auto name : {"bubble", "k4"}) {
    auto g = named_graph(name);
    CHECK(g.N() == 4);
    CHECK(superficial_degree(g, Rational(4)) == 0);
  }
  auto tad = from_skeleton(1, {{0, 0}});
  CHECK(tad.N() == 2);
  CHECK(superficial_degree(tad, Rational(2)) == 0);
  auto sun = sunset();
  CHECK(sun.N() == 2);
  CHECK(superficial_degree(sun, Rational(3)) == 0);
  CHECK(classify(Rational(0)) == Divergence::logarithmic);
  CHECK(classify(Rational(2)) == Divergence::quadratic);
  CHECK(classify(Rational(-1)) == Divergence::convergent);
}

TEST_CASE("incidence matrix columns of a tadpole-free graph") {
  auto g = complete_k4();
  auto B = g.incidence_matrix();
  REQUIRE(B.cols() == g.l());
  for (std::size_t k = 0; k < B.cols(); ++k) {
    int plus = 0, minus = 0;
    Rational sum(0);
    for (std::size_t v = 0; v < B.rows(); ++v) {
      if (B(v, k) == 1) ++plus;
      if (B(v, k) == -1) ++minus;
      sum += B(v, k);
    }
    CHECK(plus == 1);
    CHECK(minus == 1);
    CHECK(sum == 0);
  }
}

TEST_CASE("subgraph external half-lines") {
  auto g = triangle();
  auto sg = make_subgraph(g, {0});
  CHECK(sg.n() == 2);
  CHECK(sg.l() == 1);
  // l(F) = 2 n(F) - N(F)/2 for phi^4 subgraphs
  CHECK(2 * sg.l() == 4 * sg.n() - sg.external_half_lines);
}

TEST_CASE("json round trip") {
  for (auto name : {"single_line", "bubble", "triangle", "k4", "double_tadpole", "sunset"}) {
    auto g = named_graph(name);
    CHECK(from_json(to_json(g)) == g);
  }
  CHECK_THROWS_AS(from_json(nlohmann::json::parse(R"({"vertices":[{"id":0}],"lines":[{"from":[0,0]}]})")),
                  InputError);
}

TEST_CASE("property: random connected phi^4 graphs obey the counting relations") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng() % 4;
    std::size_t N = 2 * (rng() % 3);
    auto g = random_phi4_graph(n, N, rng);
    REQUIRE(g.connected());
    CHECK(validate(g).valid());
    CHECK(2 * static_cast<long>(g.l()) == 4 * static_cast<long>(n) - static_cast<long>(N));
    CHECK(2 * g.loop_count() == 2 * static_cast<long>(n) + 2 - static_cast<long>(N));
  }
}

TEST_CASE("property: incidence rank equals n - c on tadpole-free graphs") {
  std::mt19937_64 rng(12);
  int seen = 0;
  for (int trial = 0; trial < 300 && seen < 80; ++trial) {
    auto g = random_phi4_graph(1 + rng() % 4, 2 * (rng() % 3), rng, false);
    if (g.tadpole_count() > 0) continue;
    ++seen;
    CHECK(rank(g.incidence_matrix()) == g.n() - g.c());
  }
  CHECK(seen > 20);
}

TEST_CASE("property: omega in d=4 depends only on N") {
  std::mt19937_64 rng(13);
  for (std::size_t N : {2u, 4u, 6u}) {
    std::set<std::string> values;
    for (int trial = 0; trial < 100; ++trial) {
      auto g = random_phi4_graph(N / 2 + rng() % 3, N, rng);
      values.insert(superficial_degree(g, Rational(4)).get_str());
    }
    CHECK(values.size() == 1);
    CHECK(*values.begin() == std::to_string(4 - static_cast<long>(N)));
  }
}
