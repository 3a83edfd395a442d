#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "rgkit/errors.hpp"
#include "rgkit/forest/forest.hpp"
#include "rgkit/toy/toy_model.hpp"

namespace rgkit::toy {

namespace {

using Mask = std::uint64_t;

std::size_t pair_slot(std::size_t n, std::size_t k, std::size_t l) {
  if (k > l) std::swap(k, l);
  // Row-major upper triangle including the diagonal.
  return k * n - k * (k - 1) / 2 + (l - k);
}

// Edge masks of the tree path between every pair of vertices.
std::vector<Mask> tree_paths(std::size_t n, const TreeEdges& tree) {
  std::vector<Mask> out(n * n, 0);
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<Mask> reach(n, 0);
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t e = 0; e < tree.size(); ++e) {
        std::size_t u;
        if (tree[e].first == v) u = tree[e].second;
        else if (tree[e].second == v) u = tree[e].first;
        else continue;
        if (seen[u]) continue;
        seen[u] = true;
        reach[u] = reach[v] | (Mask(1) << e);
        stack.push_back(u);
      }
    }
    for (std::size_t t = 0; t < n; ++t) out[s * n + t] = reach[t];
  }
  return out;
}

double min_on(Mask m, const std::vector<double>& w) {
  double v = 1.0;
  for (std::size_t e = 0; m; ++e, m >>= 1)
    if (m & 1) v = std::min(v, w[e]);
  return v;
}

std::size_t cycle_count(const std::vector<std::size_t>& perm) {
  std::vector<bool> seen(perm.size(), false);
  std::size_t cycles = 0;
  for (std::size_t s = 0; s < perm.size(); ++s) {
    if (seen[s]) continue;
    ++cycles;
    for (std::size_t t = s; !seen[t]; t = perm[t]) seen[t] = true;
  }
  return cycles;
}

void check_tree(std::size_t n, const TreeEdges& tree) {
  if (tree.size() + 1 != n) throw InputError("a tree on n vertices has n - 1 edges");
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [a, b] : tree) {
    if (a >= n || b >= n || a == b) throw InputError("tree edge out of range");
    const std::size_t ra = find(a), rb = find(b);
    if (ra == rb) throw InputError("edge list contains a cycle");
    parent[ra] = rb;
  }
}

}  // namespace

std::vector<TreeEdges> labelled_trees(std::size_t n) {
  if (n == 0) throw InputError("trees need at least one vertex");
  if (n > 6) throw GuardError("tree enumeration limited to n <= 6");
  if (n == 1) return {TreeEdges{}};
  if (n == 2) return {TreeEdges{{0, 1}}};
  std::vector<TreeEdges> out;
  std::vector<std::size_t> code(n - 2, 0);
  while (true) {
    std::vector<std::size_t> degree(n, 1);
    for (std::size_t c : code) ++degree[c];
    TreeEdges t;
    for (std::size_t c : code) {
      std::size_t leaf = 0;
      while (degree[leaf] != 1) ++leaf;
      t.emplace_back(std::min(leaf, c), std::max(leaf, c));
      --degree[leaf];
      --degree[c];
    }
    std::size_t u = n, v = n;
    for (std::size_t k = 0; k < n; ++k)
      if (degree[k] == 1) (u == n ? u : v) = k;
    t.emplace_back(u, v);
    out.push_back(t);
    std::size_t pos = 0;
    while (pos < code.size() && ++code[pos] == n) code[pos++] = 0;
    if (pos == code.size()) break;
  }
  return out;
}

int contraction_sign(std::size_t n, const std::vector<Contraction>& omega) {
  std::vector<Contraction> sorted = omega;
  std::sort(sorted.begin(), sorted.end(), [](const Contraction& a, const Contraction& b) { return a.field < b.field; });
  long parity = 0;
  for (std::size_t r = 0; r < sorted.size(); ++r) {
    if (sorted[r].field >= 2 * n || sorted[r].antifield >= 2 * n) throw InputError("contraction index out of range");
    if (r && sorted[r].field == sorted[r - 1].field) throw InputError("field contracted twice");
    parity += static_cast<long>(sorted[r].field + sorted[r].antifield);
    for (std::size_t s = r + 1; s < sorted.size(); ++s) {
      if (sorted[s].antifield == sorted[r].antifield) throw InputError("antifield contracted twice");
      if (sorted[s].antifield < sorted[r].antifield) ++parity;
    }
  }
  return parity % 2 ? -1 : 1;
}

std::vector<std::vector<Contraction>> contraction_choices(std::size_t n, const TreeEdges& tree) {
  check_tree(n, tree);
  std::vector<std::vector<Contraction>> out{{}};
  for (auto [k, l] : tree) {
    std::vector<std::vector<Contraction>> next;
    for (const auto& partial : out)
      for (int dir = 0; dir < 2; ++dir) {
        const std::size_t from = dir ? l : k, to = dir ? k : l;
        for (std::size_t s = 0; s < 2; ++s)
          for (std::size_t t = 0; t < 2; ++t) {
            Contraction c{2 * from + s, 2 * to + t};
            bool clash = false;
            for (const auto& p : partial) clash = clash || p.field == c.field || p.antifield == c.antifield;
            if (clash) continue;
            auto grown = partial;
            grown.push_back(c);
            next.push_back(std::move(grown));
          }
      }
    out = std::move(next);
  }
  return out;
}

std::uint64_t count_color_assignments(std::size_t n, const std::vector<Contraction>& omega, std::size_t N) {
  if (N == 0) throw InputError("need at least one colour");
  double total = 1.0;
  for (std::size_t k = 0; k < 2 * n; ++k) total *= static_cast<double>(N);
  if (total > 1e7) throw GuardError("colour enumeration limited to N^{2n} <= 1e7");
  std::vector<std::size_t> c(2 * n, 0);
  std::uint64_t count = 0;
  while (true) {
    bool ok = true;
    for (const auto& o : omega) ok = ok && c[o.field] == c[o.antifield];
    count += ok;
    std::size_t pos = 0;
    while (pos < c.size() && ++c[pos] == N) c[pos++] = 0;
    if (pos == c.size()) break;
  }
  return count;
}

double tree_integrand_explicit(const Matrix<double>& K, const std::vector<std::size_t>& site,
                               const std::vector<std::array<std::size_t, 2>>& color, const TreeEdges& tree,
                               const std::vector<double>& w) {
  const std::size_t n = site.size();
  check_tree(n, tree);
  if (color.size() != n || w.size() != tree.size()) throw InputError("inconsistent tree integrand arguments");
  const auto paths = tree_paths(n, tree);
  auto slot_color = [&](std::size_t s) { return color[s / 2][s % 2]; };
  auto entry = [&](std::size_t a, std::size_t b) {
    return slot_color(a) == slot_color(b) ? K(site[a / 2], site[b / 2]) : 0.0;
  };
  Matrix<double> weakened(2 * n, 2 * n);
  for (std::size_t a = 0; a < 2 * n; ++a)
    for (std::size_t b = 0; b < 2 * n; ++b) {
      const double x = a / 2 == b / 2 ? 1.0 : min_on(paths[(a / 2) * n + b / 2], w);
      weakened(a, b) = x * entry(a, b);
    }
  double total = 0.0;
  for (const auto& omega : contraction_choices(n, tree)) {
    double lines = contraction_sign(n, omega);
    std::vector<bool> row_used(2 * n, false), col_used(2 * n, false);
    for (const auto& c : omega) {
      lines *= entry(c.field, c.antifield);
      row_used[c.field] = col_used[c.antifield] = true;
    }
    if (lines == 0.0) continue;
    std::vector<std::size_t> rows, cols;
    for (std::size_t s = 0; s < 2 * n; ++s) {
      if (!row_used[s]) rows.push_back(s);
      if (!col_used[s]) cols.push_back(s);
    }
    total += lines * determinant(weakened.select(rows, cols));
  }
  return total;
}

double tree_integrand_expanded(const Matrix<double>& K, const std::vector<std::size_t>& site,
                               const std::vector<std::array<std::size_t, 2>>& color, const TreeEdges& tree,
                               const std::vector<double>& w) {
  const std::size_t n = site.size();
  check_tree(n, tree);
  if (color.size() != n || w.size() != tree.size()) throw InputError("inconsistent tree integrand arguments");
  if (n > 5) throw GuardError("permutation expansion limited to n <= 5");
  const auto paths = tree_paths(n, tree);
  auto slot_color = [&](std::size_t s) { return color[s / 2][s % 2]; };
  std::vector<std::size_t> perm(2 * n);
  std::iota(perm.begin(), perm.end(), 0);
  double total = 0.0;
  do {
    double value = permutation_sign(perm);
    std::vector<unsigned> mult(n * n, 0);
    for (std::size_t a = 0; a < 2 * n && value != 0.0; ++a) {
      const std::size_t b = perm[a];
      if (slot_color(a) != slot_color(b)) value = 0.0;
      else value *= K(site[a / 2], site[b / 2]);
      const std::size_t u = std::min(a / 2, b / 2), v = std::max(a / 2, b / 2);
      if (u != v) ++mult[u * n + v];
    }
    if (value == 0.0) continue;
    for (std::size_t e = 0; e < tree.size() && value != 0.0; ++e) {
      const std::size_t id = std::min(tree[e].first, tree[e].second) * n + std::max(tree[e].first, tree[e].second);
      const unsigned m = mult[id];
      if (m == 0) value = 0.0;
      else value *= m * std::pow(w[e], static_cast<double>(m - 1));
      mult[id] = 0;
    }
    for (std::size_t u = 0; u < n && value != 0.0; ++u)
      for (std::size_t v = u + 1; v < n; ++v)
        if (mult[u * n + v]) value *= std::pow(min_on(paths[u * n + v], w), static_cast<double>(mult[u * n + v]));
    total += value;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

PressureSeries tree_expansion_pressure(const ToySpec& spec, std::size_t n_max) {
  if (n_max > 4) throw GuardError("tree expansion limited to n_max <= 4");
  const Matrix<Rational> K = profile_matrix(spec);
  const std::size_t S = K.rows();
  const Rational vol = volume(spec);
  PressureSeries out;
  out.coefficients.assign(n_max + 1, Rational(0));
  for (std::size_t n = 1; n <= n_max; ++n) {
    const std::size_t slots = n * (n + 1) / 2;
    // Permutations of the 2n x 2n determinant, aggregated by vertex-pair multiplicities and colour cycles.
    std::map<std::pair<std::vector<unsigned char>, std::size_t>, long> classes;
    std::vector<std::size_t> perm(2 * n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      std::vector<unsigned char> mult(slots, 0);
      for (std::size_t a = 0; a < 2 * n; ++a) ++mult[pair_slot(n, a / 2, perm[a] / 2)];
      classes[{mult, cycle_count(perm)}] += permutation_sign(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));

    std::map<std::vector<unsigned char>, Rational> site_sums;
    auto site_sum = [&](const std::vector<unsigned char>& mult) -> const Rational& {
      auto it = site_sums.find(mult);
      if (it != site_sums.end()) return it->second;
      Rational total(0);
      std::vector<std::size_t> x(n, 0);
      while (true) {
        Rational term(1);
        for (std::size_t k = 0; k < n && term != 0; ++k)
          for (std::size_t l = k; l < n; ++l)
            for (unsigned char r = 0; r < mult[pair_slot(n, k, l)]; ++r) term *= K(x[k], x[l]);
        total += term;
        std::size_t pos = 0;
        while (pos < n && ++x[pos] == S) x[pos++] = 0;
        if (pos == n) break;
      }
      return site_sums.emplace(mult, total).first->second;
    };

    Rational sum(0);
    for (const TreeEdges& tree : labelled_trees(n)) {
      const auto paths = tree_paths(n, tree);
      std::map<std::vector<unsigned char>, Rational> integrals;
      for (const auto& [key, coef] : classes) {
        if (coef == 0) continue;
        const auto& [mult, cycles] = key;
        std::vector<unsigned char> loop(mult);
        long derivative = 1;
        bool alive = true;
        for (auto [k, l] : tree) {
          const std::size_t s = pair_slot(n, k, l);
          if (loop[s] == 0) {
            alive = false;
            break;
          }
          derivative *= loop[s];
          --loop[s];  // d/dw of w^m leaves m w^{m-1}
        }
        if (!alive) continue;
        auto it = integrals.find(loop);
        if (it == integrals.end()) {
          std::vector<Mask> path_list;
          for (std::size_t k = 0; k < n; ++k)
            for (std::size_t l = k + 1; l < n; ++l)
              for (unsigned char r = 0; r < loop[pair_slot(n, k, l)]; ++r) path_list.push_back(paths[k * n + l]);
          it = integrals.emplace(loop, forest::path_min_integral(tree.size(), path_list)).first;
        }
        Rational colours(1);
        for (std::size_t c = 0; c < cycles; ++c) colours *= static_cast<unsigned long>(spec.N);
        sum += Rational(coef * derivative) * colours * it->second * site_sum(mult);
      }
    }
    // Vertex weight -lambda W with two propagators M^{-dj} / N per vertex: (-1/N)^n / n!.
    Rational prefactor(1);
    for (std::size_t k = 0; k < n; ++k) prefactor *= Rational(-1, static_cast<unsigned long>(spec.N));
    prefactor /= Rational(factorial(static_cast<unsigned>(n)));
    out.coefficients[n] = prefactor * sum / vol;
  }
  for (const auto& c : out.coefficients) out.values.push_back(to_double(c));
  return out;
}

}  // namespace rgkit::toy
