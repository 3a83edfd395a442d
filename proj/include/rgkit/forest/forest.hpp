#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rgkit/graph/feynman_graph.hpp"
#include "rgkit/numeric/matrix.hpp"
#include "rgkit/numeric/rational.hpp"
#include "rgkit/symanzik/symanzik.hpp"

namespace rgkit::forest {

using Edge = std::pair<std::size_t, std::size_t>;

struct Forest {
  std::size_t n = 0;
  std::vector<Edge> edges;
};

bool is_forest(const Forest& f);

// Edges of the forest path between i and j.
struct Path {
  bool connected = false;
  std::vector<std::size_t> edges;  // indices into Forest::edges
};
Path forest_path(const Forest& f, std::size_t i, std::size_t j);

// x^F_{ij}(w): min of w along the forest path, 0 if disconnected, 1 on the diagonal.
double x_value(const Forest& f, const std::vector<double>& w, std::size_t i, std::size_t j);
Matrix<double> x_matrix(const Forest& f, const std::vector<double>& w);
double min_eigenvalue(const Matrix<double>& m);

enum class Method { automatic, exact, monte_carlo };

struct Weight {
  double value = 0.0;
  bool exact = false;
  Rational exact_value;        // valid when exact
  double ci_half_width = 0.0;  // 95% confidence half width for Monte Carlo
  std::size_t samples = 0;
};

struct WeightOptions {
  Method method = Method::automatic;
  std::size_t samples = 200000;
  std::uint64_t seed = 1;
  std::size_t exact_loop_limit = 3;  // automatic: exact up to this many loop lines
};

// w(G,F) = int_{[0,1]^F} prod_{l not in F} x^F_l(w) for a spanning forest F of the skeleton.
Weight forest_weight(const symanzik::Multigraph& g, const symanzik::LineSet& forest, const WeightOptions& opt = {});
// Requires T to be a spanning tree of the connected skeleton.
Weight tree_weight(const graph::FeynmanGraph& g, const symanzik::LineSet& tree, const WeightOptions& opt = {});

struct TreeRow {
  symanzik::LineSet tree;
  Weight weight;
};

struct BarycentricReport {
  std::vector<TreeRow> rows;  // spanning forests (spanning trees when connected), weighed directly
  std::vector<double> component_sums;
  double forest_sum = 0.0;         // sum over the rows
  double component_product = 0.0;  // product of per-component tree sums
  bool exact = false;
  Rational exact_sum;
  Rational exact_component_product;
  double ci_half_width = 0.0;
  double component_ci_half_width = 0.0;
  double deviation() const { return forest_sum - 1.0; }
};

BarycentricReport barycentric_check(const graph::FeynmanGraph& g, const WeightOptions& opt = {});
BarycentricReport barycentric_check(const symanzik::Multigraph& g, const WeightOptions& opt = {});

// All forests (acyclic edge subsets) of the complete graph K_n.
std::vector<Forest> forests_of_complete_graph(std::size_t n);

struct FormulaReport {
  double lhs = 0.0;  // f(1,...,1)
  double rhs = 0.0;  // sum over forests of integrated derivatives
  std::size_t forests = 0;
  double relative_error() const;
};

// f(x) = exp(sum_{i<j} c_ij x_ij) with c given in lexicographic pair order; n <= 5.
// Each forest integral is split into w-orderings (linear exponent) and integrated with a
// collapsed tensor Gauss-Legendre rule of `points` nodes per axis.
FormulaReport forest_formula_verify(std::size_t n, const std::vector<double>& c, std::size_t points = 14);

std::size_t pair_index(std::size_t n, std::size_t i, std::size_t j);

// int_{[0,1]^edges} prod_p min_{k in p} w_k, exact; each path is an edge bitmask, repeats allowed,
// empty masks contribute 1. Guard: edges <= 20.
Rational path_min_integral(std::size_t edges, const std::vector<std::uint64_t>& paths);

}  // namespace rgkit::forest
