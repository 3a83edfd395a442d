#include <cmath>
#include <functional>
#include <numbers>

#include "rgkit/errors.hpp"
#include "rgkit/symanzik/symanzik.hpp"

namespace rgkit::symanzik {

namespace {

struct CompiledTerm {
  double coefficient;
  std::vector<std::size_t> factors;  // variable indices, repeated for powers
};

template <class T>
std::vector<CompiledTerm> compile(const Polynomial<T>& p) {
  std::vector<CompiledTerm> out;
  for (const auto& [e, c] : p.terms()) {
    CompiledTerm t;
    if constexpr (std::is_same_v<T, BigInt>) t.coefficient = c.get_d();
    else t.coefficient = static_cast<double>(c);
    for (std::size_t k = 0; k < e.size(); ++k)
      for (std::uint16_t r = 0; r < e[k]; ++r) t.factors.push_back(k);
    out.push_back(std::move(t));
  }
  return out;
}

double evaluate(const std::vector<CompiledTerm>& terms, const std::vector<double>& alpha) {
  double s = 0.0;
  for (const auto& t : terms) {
    double v = t.coefficient;
    for (std::size_t k : t.factors) v *= alpha[k];
    s += v;
  }
  return s;
}

}  // namespace

AmplitudeResult parametric_amplitude(const Multigraph& g, const std::vector<std::vector<double>>& vertex_p,
                                     const AmplitudeParams& params) {
  if (!g.connected()) throw InputError("amplitude needs a connected graph");
  if (params.m2 <= 0.0) throw DomainError("parametric amplitude needs m^2 > 0 (massless case not covered)");
  if (params.d <= 0.0) throw DomainError("dimension must be positive");
  const std::size_t l = g.edges.size();
  if (l == 0) throw InputError("graph has no internal lines");
  if (l > 4) throw GuardError("nested quadrature limited to 4 internal lines");
  const long loops = static_cast<long>(l) - static_cast<long>(g.num_vertices) + 1;
  AmplitudeResult res;
  res.ultraviolet_degree = params.d * static_cast<double>(loops) - 2.0 * static_cast<double>(l);
  if (res.ultraviolet_degree >= 0.0 && params.alpha_min <= 0.0)
    throw DomainError("superficially divergent integral (omega = " + std::to_string(res.ultraviolet_degree) +
                      ") needs an alpha lower cutoff");

  AlphaPolynomial u_poly = spanning_tree_polynomial(g);
  Polynomial<double> v_poly = second_symanzik(g, vertex_p);
  const auto u_terms = compile(u_poly);
  const auto v_terms = compile(v_poly);

  // Variables indexed by edge position; polynomials are indexed by g.variable[k].
  const double t_lo = std::log(params.alpha_min > 0.0 ? params.alpha_min : 1e-14);
  const double t_hi = std::log(params.alpha_max > 0.0 ? params.alpha_max : 750.0 / params.m2);
  if (t_hi <= t_lo) throw InputError("empty alpha range");

  std::vector<double> alpha(g.num_variables, 0.0);
  quad::Options opt;
  opt.abs_tol = 0.0;
  opt.max_intervals = 400;

  std::function<double(std::size_t)> level = [&](std::size_t k) -> double {
    opt.rel_tol = params.rel_tol * std::pow(0.3, static_cast<double>(l - 1 - k));
    quad::Options local = opt;
    auto f = [&](double t) {
      const double a = std::exp(t);
      alpha[g.variable[k]] = a;
      if (k + 1 < l) return a * std::exp(-params.m2 * a) * level(k + 1);
      const double u = evaluate(u_terms, alpha);
      const double v = evaluate(v_terms, alpha);
      ++res.evaluations;
      return a * std::exp(-params.m2 * a - v / u) * std::pow(u, -0.5 * params.d);
    };
    quad::Result r = quad::integrate(quad::Integrand(f), t_lo, t_hi, local);
    if (k == 0) res.error = r.error;
    return r.value;
  };
  res.value = level(0);

  if (params.normalized) {
    const double norm = std::pow(2.0 * std::numbers::pi, -params.d * static_cast<double>(l)) *
                        std::pow(std::numbers::pi, 0.5 * params.d * static_cast<double>(loops));
    res.value *= norm;
    res.error *= norm;
  }
  return res;
}

AmplitudeResult parametric_amplitude(const graph::FeynmanGraph& g, const std::vector<std::vector<double>>& external_momenta,
                                     const AmplitudeParams& params) {
  return parametric_amplitude(Multigraph::from_graph(g), vertex_momenta(g, external_momenta), params);
}

}  // namespace rgkit::symanzik
