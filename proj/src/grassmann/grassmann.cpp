#include "rgkit/grassmann/grassmann.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "rgkit/errors.hpp"

namespace rgkit::grassmann {

int product_sign(Mask a, Mask b) {
  if (a & b) return 0;
  int inversions = 0;
  for (Mask rest = b; rest; rest &= rest - 1) {
    const int j = std::countr_zero(rest);
    inversions += std::popcount(j == 63 ? Mask(0) : (a >> (j + 1)));
  }
  return inversions % 2 ? -1 : 1;
}

template <class T>
Element<T>::Element(std::size_t generators) : generators_(generators) {
  if (generators > 64) throw GuardError("at most 64 Grassmann generators are supported");
}

template <class T>
Element<T> Element<T>::scalar(std::size_t generators, const T& c) {
  Element e(generators);
  e.add_term(0, c);
  return e;
}

template <class T>
Element<T> Element<T>::generator(std::size_t generators, std::size_t index) {
  if (index >= generators) throw InputError("generator index out of range");
  Element e(generators);
  e.add_term(Mask(1) << index, T(1));
  return e;
}

template <class T>
T Element<T>::coefficient(Mask m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? T(0) : it->second;
}

template <class T>
void Element<T>::add_term(Mask m, const T& c) {
  if (generators_ < 64 && (m >> generators_)) throw InputError("monomial uses generators outside the algebra");
  if (c == T(0)) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == T(0)) terms_.erase(it);
  }
}

template <class T>
void Element<T>::check(const Element& o) const {
  if (o.generators_ != generators_) throw InputError("Grassmann elements live in different generator spaces");
}

template <class T>
Element<T> Element<T>::operator+(const Element& o) const {
  check(o);
  Element s(*this);
  for (const auto& [m, c] : o.terms_) s.add_term(m, c);
  return s;
}

template <class T>
Element<T> Element<T>::operator-(const Element& o) const {
  check(o);
  Element s(*this);
  for (const auto& [m, c] : o.terms_) s.add_term(m, -c);
  return s;
}

template <class T>
Element<T> Element<T>::operator*(const Element& o) const {
  check(o);
  Element p(generators_);
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) {
      const int s = product_sign(ma, mb);
      if (s == 0) continue;
      if (s > 0) p.add_term(ma | mb, ca * cb);
      else p.add_term(ma | mb, -(ca * cb));
    }
  return p;
}

template <class T>
Element<T> Element<T>::scaled(const T& s) const {
  Element e(generators_);
  for (const auto& [m, c] : terms_) e.add_term(m, c * s);
  return e;
}

template <class T>
bool Element<T>::is_even() const {
  for (const auto& [m, c] : terms_)
    if (std::popcount(m) % 2) return false;
  return true;
}

template <class T>
Element<T> Element<T>::exp() const {
  if (!is_even()) throw InputError("exp is only defined here for even elements");
  if (scalar_part() != T(0)) throw InputError("exp expects a nilpotent element (zero scalar part)");
  Element result = scalar(generators_, T(1));
  Element power = scalar(generators_, T(1));
  for (std::size_t k = 1; k <= generators_ / 2 + 1; ++k) {
    power = (power * (*this)).scaled(T(1) / T(static_cast<long>(k)));
    if (power.is_zero()) break;
    result = result + power;
  }
  return result;
}

template <class T>
Element<T> Element<T>::integrate(const std::vector<std::size_t>& order) const {
  Element cur(*this);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::size_t g = *it;
    if (g >= generators_) throw InputError("integration variable outside the algebra");
    const Mask bit = Mask(1) << g;
    Element next(generators_);
    for (const auto& [m, c] : cur.terms_) {
      if (!(m & bit)) continue;
      const int before = std::popcount(m & (bit - 1));
      if (before % 2) next.add_term(m ^ bit, -c);
      else next.add_term(m ^ bit, c);
    }
    cur = std::move(next);
  }
  return cur;
}

template <class T>
T Element<T>::berezin(const std::vector<std::size_t>& order) const {
  Mask covered = 0;
  for (std::size_t g : order) {
    if (g >= generators_) throw InputError("integration variable outside the algebra");
    if (covered & (Mask(1) << g)) throw InputError("integration variable repeated in the measure");
    covered |= Mask(1) << g;
  }
  if (order.size() != generators_) throw InputError("full Berezin integral needs every generator in the measure");
  return integrate(order).scalar_part();
}

template <class T>
std::string Element<T>::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c;
    for (std::size_t g = 0; g < generators_; ++g)
      if (m & (Mask(1) << g)) os << "*x" << (g + 1);
  }
  return os.str();
}

template class Element<Rational>;
template class Element<double>;

namespace {

template <class T>
T det_impl(const Matrix<T>& M) {
  if (!M.square()) throw InputError("determinant of a non-square matrix");
  const std::size_t n = M.rows();
  if (n > 8) throw GuardError("Grassmann determinant limited to n <= 8 (2^(2n)-term algebra)");
  // generator 2i = psibar_i, 2i+1 = psi_i; measure dpsibar_1 dpsi_1 dpsibar_2 dpsi_2 ...
  Element<T> action(2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (M(i, j) == T(0)) continue;
      Element<T> bilinear = Element<T>::generator(2 * n, 2 * i) * Element<T>::generator(2 * n, 2 * j + 1);
      action = action - bilinear.scaled(M(i, j));
    }
  std::vector<std::size_t> order(2 * n);
  for (std::size_t k = 0; k < 2 * n; ++k) order[k] = k;
  return action.exp().berezin(order);
}

template <class T>
T pfaffian_impl(const Matrix<T>& A) {
  if (!A.square()) throw InputError("Pfaffian of a non-square matrix");
  const std::size_t n = A.rows();
  if (n % 2) throw InputError("Pfaffian undefined for odd dimension");
  if (n > 8) throw GuardError("Grassmann Pfaffian limited to n <= 8");
  Element<T> action(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (A(i, j) == T(0)) continue;
      action = action - (Element<T>::generator(n, i) * Element<T>::generator(n, j)).scaled(A(i, j));
    }
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < n; ++k) order[k] = k;
  return action.exp().berezin(order);
}

}  // namespace

bool is_antisymmetric(const Matrix<Rational>& A) {
  if (!A.square()) return false;
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = i; j < A.cols(); ++j)
      if (A(i, j) + A(j, i) != 0) return false;
  return true;
}

bool is_antisymmetric(const Matrix<double>& A, double tol) {
  if (!A.square()) return false;
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = i; j < A.cols(); ++j)
      if (std::abs(A(i, j) + A(j, i)) > tol) return false;
  return true;
}

Rational det_via_grassmann(const Matrix<Rational>& M) { return det_impl(M); }
double det_via_grassmann(const Matrix<double>& M) { return det_impl(M); }

Rational pfaffian(const Matrix<Rational>& A) {
  if (!is_antisymmetric(A)) throw InputError("Pfaffian needs an antisymmetric matrix");
  return pfaffian_impl(A);
}

double pfaffian(const Matrix<double>& A) {
  if (!is_antisymmetric(A)) throw InputError("Pfaffian needs an antisymmetric matrix (tolerance 1e-12)");
  return pfaffian_impl(A);
}

Rational pfaffian_recursive(const Matrix<Rational>& A) {
  if (!is_antisymmetric(A)) throw InputError("Pfaffian needs an antisymmetric matrix");
  const std::size_t n = A.rows();
  if (n % 2) throw InputError("Pfaffian undefined for odd dimension");
  if (n > 12) throw GuardError("recursive Pfaffian limited to n <= 12");
  if (n == 0) return Rational(1);
  Rational total(0);
  for (std::size_t j = 1; j < n; ++j) {
    if (A(0, j) == 0) continue;
    std::vector<std::size_t> keep;
    for (std::size_t k = 1; k < n; ++k)
      if (k != j) keep.push_back(k);
    Rational term = A(0, j) * pfaffian_recursive(A.select(keep, keep));
    if (j % 2 == 1) total += term;
    else total -= term;
  }
  return total;
}

Rational quasi_pfaffian_det(const Matrix<Rational>& D, const Matrix<Rational>& A) {
  if (!D.square() || !A.square() || D.rows() != A.rows()) throw InputError("D and A must be square of equal size");
  const std::size_t n = D.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && D(i, j) != 0) throw InputError("D must be diagonal");
  if (!is_antisymmetric(A)) throw InputError("A must be antisymmetric");
  if (n > 8) throw GuardError("quasi-Pfaffian integral limited to n <= 8");
  // generator 2i = chi_i, 2i+1 = omega_i; measure dchi_1 domega_1 dchi_2 domega_2 ...
  const std::size_t g = 2 * n;
  auto chi = [&](std::size_t i) { return Element<Rational>::generator(g, 2 * i); };
  auto omega = [&](std::size_t i) { return Element<Rational>::generator(g, 2 * i + 1); };
  Element<Rational> action(g);
  for (std::size_t i = 0; i < n; ++i)
    if (D(i, i) != 0) action = action - (chi(i) * omega(i)).scaled(D(i, i));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (A(i, j) == 0) continue;
      action = action - (chi(i) * chi(j)).scaled(A(i, j));
      action = action + (omega(i) * omega(j)).scaled(A(i, j));
    }
  std::vector<std::size_t> order(g);
  for (std::size_t k = 0; k < g; ++k) order[k] = k;
  return action.exp().berezin(order);
}

}  // namespace rgkit::grassmann
