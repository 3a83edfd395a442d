#pragma once

#include <cstddef>
#include <vector>

#include "rgkit/numeric/matrix.hpp"

namespace rgkit::detbounds {

inline constexpr double kRelativeSlack = 1e-9;

// a_ij = <f_i, g_j> in R^k.
struct GramFactorization {
  std::vector<std::vector<double>> f;
  std::vector<std::vector<double>> g;
  Matrix<double> matrix() const;
};

// f_i = rows of A, g_j = coordinate basis.
GramFactorization row_factorization(const Matrix<double>& A);

struct GramReport {
  double bound = 0.0;  // prod |f_i| prod |g_j|
  double abs_det = 0.0;
  bool holds = false;
  bool tight = false;  // |det| == bound within the relative slack
};

GramReport gram_bound(const GramFactorization& fact);

struct HadamardReport {
  double row_bound = 0.0;    // prod_i |row_i|
  double col_bound = 0.0;    // prod_j |col_j|
  double sup_bound = 0.0;    // n^{n/2} (sup |a_ij|)^n
  double naive_bound = 0.0;  // n! (sup |a_ij|)^n
  double abs_det = 0.0;
  bool row_holds = false;
  bool col_holds = false;
  bool sup_holds = false;
  bool sup_below_naive = false;
  bool all_hold() const { return row_holds && col_holds && sup_holds && sup_below_naive; }
};

HadamardReport hadamard_bounds(const Matrix<double>& A);

// Sylvester construction; order must be a power of two.
Matrix<double> sylvester_hadamard(std::size_t order);

// True when a <= b up to the relative slack (plus a tiny absolute floor).
bool within(double a, double b);

struct WeakenedGramReport {
  double abs_det = 0.0;
  double bound = 0.0;
  bool holds = false;
  double min_eigenvalue = 0.0;       // of X
  double reconstruction_error = 0.0; // max |<F_a, G_b> - C_ab| of the tensorized witness
  double norm_error = 0.0;           // max ||F_a| - |f_a||, same for G
};

// C_ab = X_{v(a) v(b)} <f_a, g_b>; checks |det C| <= prod |f_a| prod |g_b|.
// X must be symmetric PSD (eigenvalue >= -1e-10) with unit diagonal; InputError otherwise.
WeakenedGramReport weakened_gram_check(const Matrix<double>& X, const std::vector<std::vector<double>>& f,
                                       const std::vector<std::size_t>& f_vertex,
                                       const std::vector<std::vector<double>>& g,
                                       const std::vector<std::size_t>& g_vertex);

// Symmetric square root through the eigendecomposition, eigenvalues clamped at 0 below 1e-12.
Matrix<double> psd_sqrt(const Matrix<double>& X);

}  // namespace rgkit::detbounds
