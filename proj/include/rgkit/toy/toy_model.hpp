#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rgkit/numeric/matrix.hpp"
#include "rgkit/numeric/rational.hpp"

namespace rgkit::toy {

// Single-slice N-colour fermions on a finite set of sites.
//
// Sites are given in slice units u = M^{-j} x, each standing for a cell of volume
// W = M^{dj}. The covariance is C_ab(x, y) = delta_ab M^{-dj/2} N^{-1/2} K(u, v) with
// K(u, v) = exp(-|u - v|), and the interaction is V = lambda W sum_u (sum_a psibar_a psi_a)^2.
// Every order-n term carries 2n propagators and n cell volumes, so (W M^{-dj})^n = 1 and all
// coefficients are rational once K is (each double is converted exactly).
struct ToySpec {
  std::vector<std::array<double, 3>> sites;
  std::size_t dim = 1;
  std::size_t N = 1;
  int j = 1;
  double M = 2.0;
};

// "line:S", "grid:S" (S^dim points), or explicit "x,y;x,y;..." coordinates.
std::vector<std::array<double, 3>> parse_sites(const std::string& text, std::size_t dim);

Matrix<Rational> profile_matrix(const ToySpec& spec);
Matrix<double> profile_matrix_double(const ToySpec& spec);

// Volume |Lambda| = (number of sites) * M^{dj}.
Rational volume(const ToySpec& spec);

struct PressureSeries {
  std::vector<Rational> coefficients;  // p_n, coefficient of lambda^n in log Z / |Lambda|
  std::vector<double> values;
};

// Berezin integral of exp(-V) against the normalized Gaussian; guard 2 * sites * N <= 16.
PressureSeries exact_log_Z(const ToySpec& spec, std::size_t n_max);

// Tree expansion of the pressure; guard n_max <= 4.
PressureSeries tree_expansion_pressure(const ToySpec& spec, std::size_t n_max);

// --- pieces of the tree formula, exposed for cross-checks ---

// Fields and antifields of vertex k are indexed 2k + sigma, sigma in {0, 1}; slot 2k carries
// colour a_k and slot 2k + 1 colour b_k.
struct Contraction {
  std::size_t field = 0;
  std::size_t antifield = 0;
};

using TreeEdges = std::vector<std::pair<std::size_t, std::size_t>>;

// All labelled trees on n vertices (Pruefer decoding); n <= 6.
std::vector<TreeEdges> labelled_trees(std::size_t n);

// Sign of the mixed derivative d/dC_{a1 b1} ... d/dC_{ak bk} det C relative to the
// complementary minor, for a 2n x 2n matrix.
int contraction_sign(std::size_t n, const std::vector<Contraction>& omega);

// Compatible contraction sets realizing each tree line once.
std::vector<std::vector<Contraction>> contraction_choices(std::size_t n, const TreeEdges& tree);

// Colour assignments (a, b) in [N]^{2n} matching every contraction; exhaustive, N^{2n} <= 1e7.
std::uint64_t count_color_assignments(std::size_t n, const std::vector<Contraction>& omega, std::size_t N);

// d_T det[X^T(w) o C] at fixed positions and colours, in two independent ways:
// explicit sum over contractions with the remaining minor, and the permutation expansion.
// site[k] indexes the sites of K; color holds (a_k, b_k) per vertex; w has one entry per tree edge.
double tree_integrand_explicit(const Matrix<double>& K, const std::vector<std::size_t>& site,
                               const std::vector<std::array<std::size_t, 2>>& color, const TreeEdges& tree,
                               const std::vector<double>& w);
double tree_integrand_expanded(const Matrix<double>& K, const std::vector<std::size_t>& site,
                               const std::vector<std::array<std::size_t, 2>>& color, const TreeEdges& tree,
                               const std::vector<double>& w);

// Remaining minors checked against the weakened Gram bound on random draws.
struct GramAudit {
  std::size_t checked = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;  // max |det| / bound
};
GramAudit gram_audit(const ToySpec& spec, std::size_t n, std::size_t samples, std::uint64_t seed);

// --- growth of the coefficients ---

struct OrderBound {
  std::size_t n = 0;
  double abs_pn = 0.0;
  double normalized = 0.0;  // (|p_n| / (N M^{-dj}))^{1/n}, 0 when p_n = 0
  double propagator_factor = 0.0;  // (M^{-dj/2} N^{-1/2})^{2n}
  double vertex_factor = 0.0;      // M^{dj n} from the vertex cells
  double color_factor = 0.0;       // N^{n+1} colour sums per tree
  double volume_factor = 0.0;      // 1 / |Lambda|
};

std::vector<OrderBound> per_order_bound(const ToySpec& spec, std::size_t n_max);

struct UniformityRow {
  std::size_t n = 0;
  double min_normalized = 0.0;
  double max_normalized = 0.0;
  double ratio() const { return min_normalized > 0.0 ? max_normalized / min_normalized : 0.0; }
  std::size_t zeros = 0;  // Pauli-forced vanishing coefficients left out
};

// Sweeps j and N over the tree expansion at fixed sites.
std::vector<UniformityRow> uniformity(const std::vector<std::array<double, 3>>& sites, std::size_t dim,
                                      const std::vector<int>& js, const std::vector<std::size_t>& Ns, double M,
                                      std::size_t n_max);

}  // namespace rgkit::toy
