#include "rgkit/detbounds/detbounds.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "rgkit/errors.hpp"

namespace rgkit::detbounds {

namespace {

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double inner(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

Eigen::MatrixXd to_eigen(const Matrix<double>& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(static_cast<long>(i), static_cast<long>(j)) = m(i, j);
  return e;
}

double abs_det(const Matrix<double>& m) { return std::abs(determinant(m)); }

}  // namespace

bool within(double a, double b) { return a <= b * (1.0 + kRelativeSlack) + 1e-13; }

Matrix<double> GramFactorization::matrix() const {
  if (f.size() != g.size()) throw InputError("Gram factorization needs as many f vectors as g vectors");
  const std::size_t n = f.size();
  const std::size_t k = n ? f[0].size() : 0;
  for (const auto& v : f)
    if (v.size() != k) throw InputError("vector dimension mismatch");
  for (const auto& v : g)
    if (v.size() != k) throw InputError("vector dimension mismatch");
  Matrix<double> a(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = inner(f[i], g[j]);
  return a;
}

GramFactorization row_factorization(const Matrix<double>& A) {
  if (!A.square()) throw InputError("row factorization needs a square matrix");
  const std::size_t n = A.rows();
  GramFactorization fact;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(n), basis(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) row[j] = A(i, j);
    basis[i] = 1.0;
    fact.f.push_back(std::move(row));
    fact.g.push_back(std::move(basis));
  }
  return fact;
}

GramReport gram_bound(const GramFactorization& fact) {
  Matrix<double> a = fact.matrix();
  GramReport r;
  r.bound = 1.0;
  for (const auto& v : fact.f) r.bound *= norm(v);
  for (const auto& v : fact.g) r.bound *= norm(v);
  r.abs_det = abs_det(a);
  r.holds = within(r.abs_det, r.bound);
  r.tight = r.holds && std::abs(r.abs_det - r.bound) <= kRelativeSlack * std::max(r.bound, 1e-300);
  return r;
}

HadamardReport hadamard_bounds(const Matrix<double>& A) {
  if (!A.square()) throw InputError("Hadamard bounds need a square matrix");
  const std::size_t n = A.rows();
  HadamardReport r;
  r.row_bound = 1.0;
  r.col_bound = 1.0;
  double sup = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double rs = 0.0, cs = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      rs += A(i, j) * A(i, j);
      cs += A(j, i) * A(j, i);
      sup = std::max(sup, std::abs(A(i, j)));
    }
    r.row_bound *= std::sqrt(rs);
    r.col_bound *= std::sqrt(cs);
  }
  const double dn = static_cast<double>(n);
  r.sup_bound = std::pow(dn, dn / 2.0) * std::pow(sup, dn);
  r.naive_bound = std::tgamma(dn + 1.0) * std::pow(sup, dn);
  r.abs_det = abs_det(A);
  r.row_holds = within(r.abs_det, r.row_bound);
  r.col_holds = within(r.abs_det, r.col_bound);
  r.sup_holds = within(r.abs_det, r.sup_bound);
  r.sup_below_naive = within(r.sup_bound, r.naive_bound);
  return r;
}

Matrix<double> sylvester_hadamard(std::size_t order) {
  if (order == 0 || (order & (order - 1))) throw InputError("Sylvester construction needs a power-of-two order");
  Matrix<double> h(1, 1, 1.0);
  while (h.rows() < order) {
    const std::size_t m = h.rows();
    Matrix<double> next(2 * m, 2 * m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        next(i, j) = h(i, j);
        next(i, j + m) = h(i, j);
        next(i + m, j) = h(i, j);
        next(i + m, j + m) = -h(i, j);
      }
    h = std::move(next);
  }
  return h;
}

Matrix<double> psd_sqrt(const Matrix<double>& X) {
  if (!X.square()) throw InputError("square root of a non-square matrix");
  const std::size_t n = X.rows();
  if (n == 0) return X;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(X));
  Eigen::VectorXd ev = es.eigenvalues();
  for (long k = 0; k < ev.size(); ++k) ev(k) = ev(k) < 1e-12 ? 0.0 : std::sqrt(ev(k));
  Eigen::MatrixXd s = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
  Matrix<double> out(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = s(static_cast<long>(i), static_cast<long>(j));
  return out;
}

WeakenedGramReport weakened_gram_check(const Matrix<double>& X, const std::vector<std::vector<double>>& f,
                                       const std::vector<std::size_t>& f_vertex,
                                       const std::vector<std::vector<double>>& g,
                                       const std::vector<std::size_t>& g_vertex) {
  if (!X.square()) throw InputError("X must be square");
  const std::size_t n = X.rows();
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(X(i, i) - 1.0) > 1e-12) throw InputError("X must have unit diagonal");
    for (std::size_t j = 0; j < n; ++j)
      if (std::abs(X(i, j) - X(j, i)) > 1e-12) throw InputError("X must be symmetric");
  }
  WeakenedGramReport r;
  if (n) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(X), Eigen::EigenvaluesOnly);
    r.min_eigenvalue = es.eigenvalues().minCoeff();
  }
  if (r.min_eigenvalue < -1e-10) throw InputError("X is not positive semidefinite");
  if (f.size() != f_vertex.size() || g.size() != g_vertex.size()) throw InputError("one vertex label per vector");
  if (f.size() != g.size()) throw InputError("minor must be square (|A| == |B|)");
  for (std::size_t v : f_vertex)
    if (v >= n) throw InputError("vertex label out of range");
  for (std::size_t v : g_vertex)
    if (v >= n) throw InputError("vertex label out of range");

  const std::size_t m = f.size();
  const std::size_t k = m ? f[0].size() : 0;
  for (const auto& v : f)
    if (v.size() != k) throw InputError("vector dimension mismatch");
  for (const auto& v : g)
    if (v.size() != k) throw InputError("vector dimension mismatch");

  Matrix<double> c(m, m, 0.0);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) c(a, b) = X(f_vertex[a], g_vertex[b]) * inner(f[a], g[b]);
  r.abs_det = abs_det(c);
  r.bound = 1.0;
  for (const auto& v : f) r.bound *= norm(v);
  for (const auto& v : g) r.bound *= norm(v);
  r.holds = within(r.abs_det, r.bound);

  // Witness: F_a = v_{i(a)} (x) f_a with v = sqrt(X), so <F_a, G_b> = X_ij <f_a, g_b>.
  Matrix<double> v = psd_sqrt(X);
  auto tensor = [&](std::size_t vertex, const std::vector<double>& x) {
    std::vector<double> t(n * k);
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < k; ++q) t[p * k + q] = v(vertex, p) * x[q];
    return t;
  };
  std::vector<std::vector<double>> F, G;
  for (std::size_t a = 0; a < m; ++a) {
    F.push_back(tensor(f_vertex[a], f[a]));
    G.push_back(tensor(g_vertex[a], g[a]));
    r.norm_error = std::max(r.norm_error, std::abs(norm(F[a]) - norm(f[a])));
    r.norm_error = std::max(r.norm_error, std::abs(norm(G[a]) - norm(g[a])));
  }
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      r.reconstruction_error = std::max(r.reconstruction_error, std::abs(inner(F[a], G[b]) - c(a, b)));
  return r;
}

}  // namespace rgkit::detbounds
