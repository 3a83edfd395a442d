#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "rgkit/errors.hpp"

namespace rgkit {

using Exponents = std::vector<std::uint16_t>;

// Sparse multivariate polynomial with a fixed number of variables.
template <class T>
class Polynomial {
 public:
  using TermMap = std::map<Exponents, T>;

  Polynomial() = default;
  explicit Polynomial(std::size_t num_vars) : num_vars_(num_vars) {}

  static Polynomial constant(std::size_t num_vars, const T& c) {
    Polynomial p(num_vars);
    if (c != T(0)) p.terms_[Exponents(num_vars, 0)] = c;
    return p;
  }

  static Polynomial variable(std::size_t num_vars, std::size_t k) {
    Polynomial p(num_vars);
    Exponents e(num_vars, 0);
    e.at(k) = 1;
    p.terms_[e] = T(1);
    return p;
  }

  std::size_t num_vars() const { return num_vars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add_term(const Exponents& e, const T& c) {
    if (e.size() != num_vars_) throw InputError("monomial arity mismatch");
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) it->second += c;
    if (it->second == T(0)) terms_.erase(it);
  }

  Polynomial operator+(const Polynomial& o) const {
    check_arity(o);
    Polynomial s(*this);
    for (const auto& [e, c] : o.terms_) s.add_term(e, c);
    return s;
  }

  Polynomial operator-(const Polynomial& o) const {
    check_arity(o);
    Polynomial s(*this);
    for (const auto& [e, c] : o.terms_) s.add_term(e, -c);
    return s;
  }

  Polynomial operator*(const Polynomial& o) const {
    check_arity(o);
    Polynomial p(num_vars_);
    for (const auto& [ea, ca] : terms_)
      for (const auto& [eb, cb] : o.terms_) {
        Exponents e(num_vars_);
        for (std::size_t k = 0; k < num_vars_; ++k) e[k] = ea[k] + eb[k];
        p.add_term(e, ca * cb);
      }
    return p;
  }

  Polynomial scaled(const T& s) const {
    Polynomial p(num_vars_);
    for (const auto& [e, c] : terms_) p.add_term(e, c * s);
    return p;
  }

  bool operator==(const Polynomial& o) const { return num_vars_ == o.num_vars_ && terms_ == o.terms_; }

  // Returns -1 for the zero polynomial, the common degree if homogeneous, -2 otherwise.
  int homogeneous_degree() const {
    if (terms_.empty()) return -1;
    int deg = -1;
    for (const auto& [e, c] : terms_) {
      int d = std::accumulate(e.begin(), e.end(), 0);
      if (deg == -1) deg = d;
      else if (d != deg) return -2;
    }
    return deg;
  }

  template <class V>
  V evaluate(const std::vector<V>& x) const {
    if (x.size() != num_vars_) throw InputError("evaluation point arity mismatch");
    V total(0);
    for (const auto& [e, c] : terms_) {
      V term = V(c);
      for (std::size_t k = 0; k < num_vars_; ++k)
        for (std::uint16_t p = 0; p < e[k]; ++p) term *= x[k];
      total += term;
    }
    return total;
  }

  // Human-readable form such as "a1*a2 + 2*a3^2", variables named prefix+index (1-based).
  std::string to_string(const std::string& prefix = "a") const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      bool unit = (c == T(1));
      bool constant_term = std::accumulate(e.begin(), e.end(), 0) == 0;
      if (!unit || constant_term) os << c;
      bool need_star = !unit;
      for (std::size_t k = 0; k < num_vars_; ++k) {
        if (!e[k]) continue;
        if (need_star) os << "*";
        os << prefix << (k + 1);
        if (e[k] > 1) os << "^" << e[k];
        need_star = true;
      }
    }
    return os.str();
  }

 private:
  void check_arity(const Polynomial& o) const {
    if (o.num_vars_ != num_vars_) throw InputError("polynomial arity mismatch");
  }

  std::size_t num_vars_ = 0;
  TermMap terms_;
};

}  // namespace rgkit
