#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rgkit/numeric/matrix.hpp"
#include "rgkit/numeric/rational.hpp"

namespace rgkit::grassmann {

using Mask = std::uint64_t;

// Element of the exterior algebra on `generators` anticommuting symbols.
// A monomial is a bitmask; its canonical form lists generators in increasing index.
//
// Berezin convention (nested): the measure dchi_{o1} ... dchi_{ok} integrates the
// rightmost differential first, with  int dchi chi = 1  as a left derivative. Hence
//   int dchi_1 ... dchi_n  chi_n ... chi_1 = 1,
//   int dchi_1 dchi_2 exp(-chi_1 chi_2) = +1  (Pf [[0,1],[-1,0]] = 1),
//   int prod_i dpsibar_i dpsi_i exp(-psibar M psi) = det M.
template <class T>
class Element {
 public:
  using Terms = std::map<Mask, T>;

  explicit Element(std::size_t generators = 0);
  static Element scalar(std::size_t generators, const T& c);
  static Element generator(std::size_t generators, std::size_t index);

  std::size_t generators() const { return generators_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  T coefficient(Mask m) const;
  T scalar_part() const { return coefficient(0); }

  void add_term(Mask m, const T& c);
  Element operator+(const Element& o) const;
  Element operator-(const Element& o) const;
  Element operator*(const Element& o) const;
  Element scaled(const T& s) const;
  bool operator==(const Element& o) const { return generators_ == o.generators_ && terms_ == o.terms_; }

  bool is_even() const;
  // exp of an even element with zero scalar part, by the terminating power series.
  Element exp() const;

  // Integrates against dchi_{order[0]} ... dchi_{order[k-1]}; the rest stays symbolic.
  Element integrate(const std::vector<std::size_t>& order) const;
  // Full Berezin integral over every generator in `order` (must cover all); returns the scalar.
  T berezin(const std::vector<std::size_t>& order) const;

  std::string to_string() const;

 private:
  void check(const Element& o) const;
  std::size_t generators_;
  Terms terms_;
};

// Sign of chi_a chi_b -> canonical(a|b); 0 when the monomials overlap.
int product_sign(Mask a, Mask b);

// int prod_i dpsibar_i dpsi_i exp(-sum psibar_i M_ij psi_j); guard n <= 8.
Rational det_via_grassmann(const Matrix<Rational>& M);
double det_via_grassmann(const Matrix<double>& M);

// Pf(A) = int dchi_1..dchi_n exp(-1/2 sum chi_i A_ij chi_j); guard n <= 8.
Rational pfaffian(const Matrix<Rational>& A);
double pfaffian(const Matrix<double>& A);

// Expansion along the first row; independent oracle, guard n <= 12.
Rational pfaffian_recursive(const Matrix<Rational>& A);

// int prod_i dchi_i domega_i exp(-sum chi_i D_ii omega_i - sum_{i<j} chi_i A_ij chi_j
//                                 + sum_{i<j} omega_i A_ij omega_j)  = det(D + A).
Rational quasi_pfaffian_det(const Matrix<Rational>& D, const Matrix<Rational>& A);

bool is_antisymmetric(const Matrix<Rational>& A);
bool is_antisymmetric(const Matrix<double>& A, double tol = 1e-12);

}  // namespace rgkit::grassmann
