#include "rgkit/toy/toy_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "rgkit/detbounds/detbounds.hpp"
#include "rgkit/errors.hpp"
#include "rgkit/grassmann/grassmann.hpp"

namespace rgkit::toy {

namespace {

void check_spec(const ToySpec& spec) {
  if (spec.sites.empty()) throw InputError("toy model needs at least one site");
  if (spec.dim < 1 || spec.dim > 3) throw InputError("dimension must be 1, 2 or 3");
  if (spec.N == 0) throw InputError("colour count must be positive");
  if (!(spec.M > 1.0)) throw InputError("scale ratio M must exceed 1");
  if (spec.j < 0) throw InputError("slice index must be non-negative");
}

double distance(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2]));
}

Matrix<Rational> inverse(Matrix<Rational> a) {
  const std::size_t n = a.rows();
  Matrix<Rational> inv = Matrix<Rational>::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c) == 0) ++p;
    if (p == n) throw InvariantError("covariance profile is singular");
    for (std::size_t k = 0; k < n; ++k) {
      std::swap(a(c, k), a(p, k));
      std::swap(inv(c, k), inv(p, k));
    }
    const Rational piv = a(c, c);
    for (std::size_t k = 0; k < n; ++k) {
      a(c, k) /= piv;
      inv(c, k) /= piv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a(r, c) == 0) continue;
      const Rational f = a(r, c);
      for (std::size_t k = 0; k < n; ++k) {
        a(r, k) -= f * a(c, k);
        inv(r, k) -= f * inv(c, k);
      }
    }
  }
  return inv;
}

}  // namespace

std::vector<std::array<double, 3>> parse_sites(const std::string& text, std::size_t dim) {
  if (dim < 1 || dim > 3) throw InputError("dimension must be 1, 2 or 3");
  std::vector<std::array<double, 3>> out;
  auto count_after = [&](const std::string& prefix) -> long {
    try {
      const long s = std::stol(text.substr(prefix.size()));
      if (s < 1) throw InputError("site count must be positive");
      return s;
    } catch (const std::logic_error&) {
      throw InputError("bad site specification '" + text + "'");
    }
  };
  if (text.rfind("line:", 0) == 0) {
    const long s = count_after("line:");
    for (long k = 0; k < s; ++k) out.push_back({static_cast<double>(k), 0.0, 0.0});
    return out;
  }
  if (text.rfind("grid:", 0) == 0) {
    const long s = count_after("grid:");
    std::array<long, 3> idx{0, 0, 0};
    while (true) {
      std::array<double, 3> p{0.0, 0.0, 0.0};
      for (std::size_t d = 0; d < dim; ++d) p[d] = static_cast<double>(idx[d]);
      out.push_back(p);
      std::size_t d = 0;
      while (d < dim && ++idx[d] == s) idx[d++] = 0;
      if (d == dim) break;
    }
    return out;
  }
  std::stringstream points(text);
  std::string item;
  while (std::getline(points, item, ';')) {
    std::array<double, 3> p{0.0, 0.0, 0.0};
    std::stringstream coords(item);
    std::string c;
    std::size_t d = 0;
    while (std::getline(coords, c, ',')) {
      if (d >= dim) throw InputError("site '" + item + "' has more than " + std::to_string(dim) + " coordinates");
      try {
        p[d++] = std::stod(c);
      } catch (const std::logic_error&) {
        throw InputError("bad coordinate '" + c + "'");
      }
    }
    if (d != dim) throw InputError("site '" + item + "' needs " + std::to_string(dim) + " coordinates");
    out.push_back(p);
  }
  if (out.empty()) throw InputError("no sites given");
  return out;
}

Matrix<double> profile_matrix_double(const ToySpec& spec) {
  check_spec(spec);
  const std::size_t S = spec.sites.size();
  Matrix<double> K(S, S);
  for (std::size_t a = 0; a < S; ++a)
    for (std::size_t b = 0; b < S; ++b) K(a, b) = std::exp(-distance(spec.sites[a], spec.sites[b]));
  return K;
}

Matrix<Rational> profile_matrix(const ToySpec& spec) {
  const Matrix<double> K = profile_matrix_double(spec);
  Matrix<Rational> out(K.rows(), K.cols());
  for (std::size_t a = 0; a < K.rows(); ++a)
    for (std::size_t b = 0; b < K.cols(); ++b) out(a, b) = to_rational(K(a, b));
  return out;
}

Rational volume(const ToySpec& spec) {
  check_spec(spec);
  // M^{dj} is exact for integral M; otherwise the double value is taken as given.
  const Rational cell = to_rational(std::pow(spec.M, static_cast<double>(spec.dim) * spec.j));
  return cell * Rational(static_cast<unsigned long>(spec.sites.size()));
}

PressureSeries exact_log_Z(const ToySpec& spec, std::size_t n_max) {
  check_spec(spec);
  const std::size_t S = spec.sites.size(), N = spec.N;
  const std::size_t modes = S * N, gens = 2 * modes;
  if (gens > 16) throw GuardError("exact partition function limited to 2 * sites * N <= 16 generators");
  using E = grassmann::Element<Rational>;
  const Matrix<Rational> A = inverse(profile_matrix(spec));
  // generator 2m = psibar_m, 2m + 1 = psi_m with m = site * N + colour
  auto psibar = [&](std::size_t x, std::size_t a) { return E::generator(gens, 2 * (x * N + a)); };
  auto psi = [&](std::size_t x, std::size_t a) { return E::generator(gens, 2 * (x * N + a) + 1); };
  E action(gens);
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t x = 0; x < S; ++x)
      for (std::size_t y = 0; y < S; ++y)
        if (A(x, y) != 0) action = action - (psibar(x, a) * psi(y, a)).scaled(A(x, y));
  const E gauss = action.exp();
  std::vector<std::size_t> order(gens);
  std::iota(order.begin(), order.end(), 0);
  const Rational norm = gauss.berezin(order);

  E v0(gens);
  for (std::size_t x = 0; x < S; ++x) {
    E density(gens);
    for (std::size_t a = 0; a < N; ++a) density = density + psibar(x, a) * psi(x, a);
    v0 = v0 + density * density;
  }
  // z_n = (-1/N)^n / n! <V0^n>, the vertex weight W times two propagator scales per vertex.
  std::vector<Rational> z(n_max + 1, Rational(0));
  z[0] = 1;
  E power = E::scalar(gens, Rational(1));
  for (std::size_t n = 1; n <= n_max; ++n) {
    power = power * v0;
    if (power.is_zero()) break;
    Rational moment = (gauss * power).berezin(order) / norm;
    for (std::size_t k = 0; k < n; ++k) moment *= Rational(-1, static_cast<unsigned long>(N));
    z[n] = moment / Rational(factorial(static_cast<unsigned>(n)));
  }
  // log of the power series with z_0 = 1.
  std::vector<Rational> l(n_max + 1, Rational(0));
  for (std::size_t n = 1; n <= n_max; ++n) {
    Rational acc = z[n];
    for (std::size_t k = 1; k < n; ++k)
      acc -= Rational(static_cast<unsigned long>(k), static_cast<unsigned long>(n)) * l[k] * z[n - k];
    l[n] = acc;
  }
  const Rational vol = volume(spec);
  PressureSeries out;
  for (auto& c : l) {
    out.coefficients.push_back(c / vol);
    out.values.push_back(to_double(out.coefficients.back()));
  }
  return out;
}

GramAudit gram_audit(const ToySpec& spec, std::size_t n, std::size_t samples, std::uint64_t seed) {
  check_spec(spec);
  if (n < 1 || n > 6) throw InputError("audit order must lie in 1..6");
  const Matrix<double> K = profile_matrix_double(spec);
  const Matrix<double> root = detbounds::psd_sqrt(K);
  const std::size_t S = K.rows(), N = spec.N;
  const auto trees = labelled_trees(n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  GramAudit audit;
  for (std::size_t q = 0; q < samples; ++q) {
    std::vector<std::size_t> site(n);
    std::vector<std::size_t> colour(2 * n);
    for (auto& s : site) s = std::uniform_int_distribution<std::size_t>(0, S - 1)(rng);
    for (auto& c : colour) c = std::uniform_int_distribution<std::size_t>(0, N - 1)(rng);
    const TreeEdges& tree = trees[std::uniform_int_distribution<std::size_t>(0, trees.size() - 1)(rng)];
    const auto choices = contraction_choices(n, tree);
    const auto& omega = choices[std::uniform_int_distribution<std::size_t>(0, choices.size() - 1)(rng)];
    std::vector<double> w(tree.size());
    for (auto& v : w) v = unit(rng);

    // X^T(w): min of w along the tree path.
    Matrix<double> X = Matrix<double>::identity(n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) {
        std::vector<std::size_t> prev(n, n), prev_edge(n, 0);
        std::vector<std::size_t> stack{a};
        prev[a] = a;
        while (!stack.empty()) {
          const std::size_t v = stack.back();
          stack.pop_back();
          for (std::size_t e = 0; e < tree.size(); ++e) {
            const std::size_t u = tree[e].first == v ? tree[e].second : tree[e].second == v ? tree[e].first : n;
            if (u == n || prev[u] != n) continue;
            prev[u] = v;
            prev_edge[u] = e;
            stack.push_back(u);
          }
        }
        double m = 1.0;
        for (std::size_t v = b; v != a; v = prev[v]) m = std::min(m, w[prev_edge[v]]);
        X(a, b) = X(b, a) = m;
      }

    std::vector<bool> row_used(2 * n, false), col_used(2 * n, false);
    for (const auto& c : omega) row_used[c.field] = col_used[c.antifield] = true;
    std::vector<std::vector<double>> f, g;
    std::vector<std::size_t> fv, gv;
    auto vec = [&](std::size_t slot) {
      std::vector<double> out(S * N, 0.0);
      const std::size_t x = site[slot / 2], c = colour[slot];
      for (std::size_t y = 0; y < S; ++y) out[c * S + y] = root(x, y);
      return out;
    };
    for (std::size_t s = 0; s < 2 * n; ++s) {
      if (!row_used[s]) {
        f.push_back(vec(s));
        fv.push_back(s / 2);
      }
      if (!col_used[s]) {
        g.push_back(vec(s));
        gv.push_back(s / 2);
      }
    }
    const auto rep = detbounds::weakened_gram_check(X, f, fv, g, gv);
    ++audit.checked;
    if (!rep.holds) ++audit.violations;
    if (rep.bound > 0.0) audit.worst_ratio = std::max(audit.worst_ratio, rep.abs_det / rep.bound);
  }
  return audit;
}

std::vector<OrderBound> per_order_bound(const ToySpec& spec, std::size_t n_max) {
  const PressureSeries series = tree_expansion_pressure(spec, n_max);
  const double cell = std::pow(spec.M, static_cast<double>(spec.dim) * spec.j);
  const double N = static_cast<double>(spec.N);
  std::vector<OrderBound> out;
  for (std::size_t n = 1; n <= n_max; ++n) {
    OrderBound b;
    b.n = n;
    b.abs_pn = std::abs(series.values[n]);
    b.normalized = b.abs_pn > 0.0 ? std::pow(b.abs_pn * cell / N, 1.0 / static_cast<double>(n)) : 0.0;
    b.propagator_factor = std::pow(1.0 / (cell * N), static_cast<double>(n));
    b.vertex_factor = std::pow(cell, static_cast<double>(n));
    b.color_factor = std::pow(N, static_cast<double>(n + 1));
    b.volume_factor = 1.0 / (cell * static_cast<double>(spec.sites.size()));
    out.push_back(b);
  }
  return out;
}

std::vector<UniformityRow> uniformity(const std::vector<std::array<double, 3>>& sites, std::size_t dim,
                                      const std::vector<int>& js, const std::vector<std::size_t>& Ns, double M,
                                      std::size_t n_max) {
  std::vector<UniformityRow> rows(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) {
    rows[n - 1].n = n;
    rows[n - 1].min_normalized = INFINITY;
  }
  for (int j : js)
    for (std::size_t N : Ns) {
      const ToySpec spec{sites, dim, N, j, M};
      for (const auto& b : per_order_bound(spec, n_max)) {
        auto& r = rows[b.n - 1];
        if (b.normalized == 0.0) {
          ++r.zeros;
          continue;
        }
        r.min_normalized = std::min(r.min_normalized, b.normalized);
        r.max_normalized = std::max(r.max_normalized, b.normalized);
      }
    }
  for (auto& r : rows)
    if (std::isinf(r.min_normalized)) r.min_normalized = 0.0;
  return rows;
}

}  // namespace rgkit::toy
