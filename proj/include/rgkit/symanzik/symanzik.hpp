#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "rgkit/graph/feynman_graph.hpp"
#include "rgkit/numeric/matrix.hpp"
#include "rgkit/numeric/polynomial.hpp"
#include "rgkit/numeric/quadrature.hpp"
#include "rgkit/numeric/rational.hpp"

namespace rgkit::symanzik {

using AlphaPolynomial = Polynomial<BigInt>;
using LineSet = std::vector<std::size_t>;

// Internal skeleton with a Schwinger variable index per edge; variable indices
// survive deletion and contraction so polynomials stay comparable.
struct Multigraph {
  std::size_t num_vertices = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::size_t> variable;  // variable[k] = alpha index of edge k
  std::size_t num_variables = 0;

  static Multigraph from_graph(const graph::FeynmanGraph& g);
  bool is_tadpole(std::size_t k) const { return edges[k].first == edges[k].second; }
  bool connected() const;
  bool is_bridge(std::size_t k) const;
  Multigraph deleted(std::size_t k) const;
  Multigraph contracted(std::size_t k) const;  // parallel edges of k become tadpoles
};

// Spanning trees as sets of edge indices (tadpoles never belong to a tree).
std::vector<LineSet> spanning_trees(const Multigraph& g);
std::vector<LineSet> spanning_trees(const graph::FeynmanGraph& g);  // InputError if disconnected

// Kirchhoff: determinant of the reduced Laplacian (exact Bareiss).
BigInt kirchhoff_tree_count(const Multigraph& g);

// U = sum_T prod_{l not in T} alpha_l; zero polynomial for a disconnected graph.
// Tadpoles are allowed here (their alpha multiplies every term).
AlphaPolynomial spanning_tree_polynomial(const Multigraph& g);

// First Symanzik polynomial; rejects disconnected graphs and tadpoles.
AlphaPolynomial first_symanzik(const graph::FeynmanGraph& g);

struct TwoForest {
  LineSet lines;
  std::vector<bool> in_first;  // in_first[v]: v belongs to the component of vertex 0
};

std::vector<TwoForest> spanning_two_forests(const Multigraph& g);

// external_momenta[e] = d-vector of the momentum entering through the e-th external vertex
// (graph order). V = sum_{T2} prod_{l not in T2} alpha_l (sum_{v in E} P_v)^2.
Polynomial<double> second_symanzik(const graph::FeynmanGraph& g, const std::vector<std::vector<double>>& external_momenta,
                                   double conservation_tol = 1e-9);
Polynomial<double> second_symanzik(const Multigraph& g, const std::vector<std::vector<double>>& vertex_momenta,
                                   double conservation_tol = 1e-9);

// U_G == alpha_l U_{G-l} + U_{G/l}; false on mismatch, InputError for a tadpole line.
bool deletion_contraction_holds(const Multigraph& g, std::size_t line);

struct TreeMatrixReport {
  Rational minor_det;  // det A^{11}
  Rational tree_sum;   // sum over trees directed away from root 1 of prod (-A_{parent,child})
  std::size_t trees = 0;
  bool equal() const { return minor_det == tree_sum; }
};

// Requires zero column sums (exact); InputError otherwise. Guard n <= 9.
TreeMatrixReport tree_matrix_check(const Matrix<Rational>& A);

struct AmplitudeParams {
  double m2 = 1.0;
  double d = 4.0;
  double alpha_min = 0.0;  // UV regulator; 0 means none
  double alpha_max = 0.0;  // 0 means unbounded
  bool normalized = true;  // include (2pi)^{-d l} pi^{d L / 2}
  double rel_tol = 1e-8;
};

struct AmplitudeResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  double ultraviolet_degree = 0.0;  // d L - 2 l
};

// N_G int prod dalpha e^{-m^2 alpha} e^{-V/U} / U^{d/2} by nested adaptive quadrature in
// log alpha. DomainError when the integral diverges without a regulator.
AmplitudeResult parametric_amplitude(const graph::FeynmanGraph& g, const std::vector<std::vector<double>>& external_momenta,
                                     const AmplitudeParams& params);
AmplitudeResult parametric_amplitude(const Multigraph& g, const std::vector<std::vector<double>>& vertex_momenta,
                                     const AmplitudeParams& params);

// Momenta entering each skeleton vertex, summed over its external legs (an empty list means p = 0).
std::vector<std::vector<double>> vertex_momenta(const graph::FeynmanGraph& g,
                                                const std::vector<std::vector<double>>& external_momenta);

}  // namespace rgkit::symanzik
