#include "checks.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "rgkit/detbounds/detbounds.hpp"
#include "rgkit/forest/forest.hpp"
#include "rgkit/graph/generators.hpp"
#include "rgkit/grassmann/grassmann.hpp"
#include "rgkit/rgflow/rgflow.hpp"
#include "rgkit/sectors/hubbard.hpp"
#include "rgkit/sectors/jellium.hpp"
#include "rgkit/symanzik/symanzik.hpp"
#include "rgkit/toy/toy_model.hpp"
#include "rgkit/wick/wick.hpp"

namespace rgkit::cli {

namespace {

class Suite {
 public:
  explicit Suite(std::string command) { report_.command = std::move(command); report_.table.columns = {"check", "result", "detail"}; }

  void add(const std::string& name, bool passed, const std::string& detail) {
    report_.table.rows.push_back({name, passed ? "PASS" : "FAIL", detail});
    if (passed) ++passed_;
    report_.ok = report_.ok && passed;
  }

  Report finish() {
    report_.add("passed", passed_);
    report_.add("total", report_.table.rows.size());
    return std::move(report_);
  }

 private:
  Report report_;
  std::size_t passed_ = 0;
};

template <class T>
std::string str(const T& v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

Rational random_rational(std::mt19937_64& rng) {
  Rational q(static_cast<long>(rng() % 11) - 5, static_cast<long>(1 + rng() % 4));
  q.canonicalize();
  return q;
}

Matrix<Rational> random_antisymmetric(std::size_t n, std::mt19937_64& rng) {
  Matrix<Rational> A(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      A(i, j) = random_rational(rng);
      A(j, i) = -A(i, j);
    }
  return A;
}

}  // namespace

Report check_wick(std::uint64_t) {
  Suite s("wick --check");
  bool ok = true;
  for (std::size_t m = 0; m <= 10; m += 2) {
    std::size_t visited = 0;
    wick::for_each_pairing(m, [&](const wick::Pairing&) { ++visited; });
    ok = ok && BigInt(static_cast<unsigned long>(visited)) == wick::count_pairings(static_cast<long>(m));
  }
  s.add("pairing count (2p-1)!!", ok, "m = 0..10");

  auto e = wick::enumerate_schemes(1, 2);
  std::vector<BigInt> m;
  for (const auto& c : e.classes) m.push_back(c.multiplicity);
  std::sort(m.begin(), m.end());
  std::string mults;
  for (const auto& x : m) mults += (mults.empty() ? "" : " ") + x.get_str();
  s.add("example n=1 N=2", e.total_schemes == 15 && mults == "3 12", "15 schemes, multiplicities " + mults);

  ok = true;
  std::string detail;
  for (std::size_t n = 0; n <= 2; ++n)
    for (std::size_t N = 0; N <= 4; N += 2) {
      if (n == 0 && N == 0) continue;
      auto en = wick::enumerate_schemes(n, N);
      BigInt sum = 0;
      for (const auto& c : en.classes) {
        sum += c.multiplicity;
        const Rational S = wick::symmetry_factor(c, n);
        ok = ok && S.get_den() == 1 && S * c.multiplicity == factorial(static_cast<unsigned>(n)) * rational_pow(24, static_cast<unsigned>(n));
      }
      ok = ok && sum == en.total_schemes &&
           sum == odd_double_factorial(static_cast<unsigned>((4 * n + N) / 2));
    }
  s.add("multiplicities sum and S mult = 24^n n!", ok, "n <= 2, N <= 4");

  auto all = wick::enumerate_schemes(2, 2);
  auto v = wick::enumerate_schemes(2, 2, {4.0e7, true});
  bool no_vacuum = !v.classes.empty() && v.classes.size() < all.classes.size();
  for (const auto& c : v.classes) no_vacuum = no_vacuum && !c.has_vacuum_component;
  s.add("vacuum filter", no_vacuum && v.retained_schemes < v.total_schemes,
        str(v.classes.size()) + " of " + str(all.classes.size()) + " classes kept at n=2 N=2");
  return s.finish();
}

Report check_grassmann(std::uint64_t seed) {
  Suite s("grassmann --check");
  std::mt19937_64 rng(seed);
  Matrix<Rational> J{{0, 1}, {-1, 0}};
  s.add("Pf [[0,1],[-1,0]] = 1", grassmann::pfaffian(J) == 1, to_string(grassmann::pfaffian(J)));

  std::size_t good = 0, total = 0;
  for (std::size_t n = 2; n <= 8; n += 2)
    for (int t = 0; t < 5; ++t, ++total) {
      auto A = random_antisymmetric(n, rng);
      const Rational pf = grassmann::pfaffian(A);
      if (pf * pf == bareiss_determinant(A) && pf == grassmann::pfaffian_recursive(A)) ++good;
    }
  s.add("Pf^2 = det, Berezin = recursive", good == total, str(good) + "/" + str(total));

  good = total = 0;
  for (std::size_t n = 1; n <= 5; ++n)
    for (int t = 0; t < 4; ++t, ++total) {
      Matrix<Rational> M(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) M(i, j) = random_rational(rng);
      if (grassmann::det_via_grassmann(M) == bareiss_determinant(M)) ++good;
    }
  s.add("Grassmann Gaussian = det", good == total, str(good) + "/" + str(total));

  good = total = 0;
  for (std::size_t n = 1; n <= 4; ++n)
    for (int t = 0; t < 3; ++t, ++total) {
      auto A = random_antisymmetric(n, rng);
      Matrix<Rational> D(n, n);
      for (std::size_t i = 0; i < n; ++i) D(i, i) = random_rational(rng);
      Matrix<Rational> DA(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) DA(i, j) = D(i, j) + A(i, j);
      if (grassmann::quasi_pfaffian_det(D, A) == bareiss_determinant(DA)) ++good;
    }
  s.add("quasi-Pfaffian = det(D+A)", good == total, str(good) + "/" + str(total));
  return s.finish();
}

Report check_symanzik(std::uint64_t seed) {
  Suite s("symanzik --check");
  std::mt19937_64 rng(seed);
  auto k4 = symanzik::Multigraph::from_graph(graph::complete_k4());
  s.add("K4 tree count 16", symanzik::kirchhoff_tree_count(k4) == 16 && symanzik::spanning_trees(k4).size() == 16,
        "Kirchhoff " + symanzik::kirchhoff_tree_count(k4).get_str());

  std::size_t good = 0, total = 0, lines = 0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t v = 2 + rng() % 3, e = v + rng() % 3;
    symanzik::Multigraph g;
    g.num_vertices = v;
    g.edges = graph::random_connected_multigraph(v, e, rng);
    for (std::size_t k = 0; k < g.edges.size(); ++k) g.variable.push_back(k);
    g.num_variables = g.edges.size();
    ++total;
    bool ok = symanzik::kirchhoff_tree_count(g) == BigInt(static_cast<unsigned long>(symanzik::spanning_trees(g).size()));
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
      if (g.is_tadpole(k)) continue;
      ++lines;
      ok = ok && symanzik::deletion_contraction_holds(g, k);
    }
    if (ok) ++good;
  }
  s.add("Kirchhoff and deletion-contraction", good == total, str(good) + "/" + str(total) + " graphs, " + str(lines) + " lines");

  good = total = 0;
  for (std::size_t n = 2; n <= 5; ++n)
    for (int t = 0; t < 5; ++t, ++total) {
      Matrix<Rational> A(n, n);
      for (std::size_t j = 0; j < n; ++j) {
        Rational col(0);
        for (std::size_t i = 0; i < n; ++i)
          if (i != j) {
            A(i, j) = random_rational(rng);
            col += A(i, j);
          }
        A(j, j) = -col;
      }
      if (symanzik::tree_matrix_check(A).equal()) ++good;
    }
  s.add("Tree Matrix Theorem", good == total, str(good) + "/" + str(total));
  return s.finish();
}

Report check_forest(std::uint64_t seed) {
  Suite s("forest --check");
  for (auto name : {"single_line", "bubble", "triangle", "k4", "sunset"}) {
    auto r = forest::barycentric_check(graph::named_graph(name));
    s.add(std::string("sum of tree weights, ") + name, r.exact && r.exact_sum == 1, "exact sum " + to_string(r.exact_sum));
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  double worst = 0.0;
  for (std::size_t n = 2; n <= 4; ++n) {
    std::vector<double> c(n * (n - 1) / 2);
    for (auto& x : c) x = u(rng);
    worst = std::max(worst, forest::forest_formula_verify(n, c).relative_error());
  }
  s.add("forest formula, n <= 4", worst < 1e-6, "max relative error " + format_number(worst));

  std::uniform_real_distribution<double> w01(0, 1);
  double min_eig = INFINITY;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng() % 5;
    forest::Forest f{n, {}};
    for (std::size_t v = 1; v < n; ++v)
      if (rng() % 3) f.edges.emplace_back(rng() % v, v);
    std::vector<double> w(f.edges.size());
    for (auto& x : w) x = w01(rng);
    min_eig = std::min(min_eig, forest::min_eigenvalue(forest::x_matrix(f, w)));
  }
  s.add("X(w) positive semidefinite", min_eig > -1e-10, "min eigenvalue " + format_number(min_eig));
  return s.finish();
}

Report check_bounds(std::uint64_t seed) {
  Suite s("bounds --check");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  std::normal_distribution<double> g;
  std::size_t violations = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(t % 9);
    Matrix<double> A(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) A(i, j) = u(rng);
    if (!detbounds::hadamard_bounds(A).all_hold()) ++violations;
    if (!detbounds::gram_bound(detbounds::row_factorization(A)).holds) ++violations;
  }
  s.add("Gram and Hadamard bounds", violations == 0, str(violations) + " violations on 1000 matrices");

  auto h = detbounds::hadamard_bounds(detbounds::sylvester_hadamard(4));
  s.add("order-4 Hadamard attains the sup bound", std::abs(h.abs_det - 16.0) < 1e-9 && std::abs(h.sup_bound - 16.0) < 1e-9,
        "|det| = " + format_number(h.abs_det));

  violations = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t nv = 2 + rng() % 3;
    forest::Forest fo{nv, {}};
    for (std::size_t v = 1; v < nv; ++v)
      if (rng() % 4) fo.edges.emplace_back(rng() % v, v);
    std::vector<double> w(fo.edges.size());
    for (auto& x : w) x = 0.5 * (u(rng) + 1.0);
    const std::size_t m = nv + rng() % 3;
    std::vector<std::size_t> fv(m), gv(m);
    std::vector<std::vector<double>> f(m, std::vector<double>(3)), gg(m, std::vector<double>(3));
    for (std::size_t a = 0; a < m; ++a) {
      fv[a] = rng() % nv;
      gv[a] = rng() % nv;
      for (auto& c : f[a]) c = g(rng);
      for (auto& c : gg[a]) c = g(rng);
    }
    if (!detbounds::weakened_gram_check(forest::x_matrix(fo, w), f, fv, gg, gv).holds) ++violations;
  }
  s.add("weakened Gram", violations == 0, str(violations) + " violations on 200 draws");
  return s.finish();
}

Report check_flow(std::uint64_t) {
  Suite s("flow --check");
  auto af = rgflow::flow_asymptotically_free(0.1, 1.0, 0.0, 10);
  double worst = 0.0;
  for (std::size_t i = 0; i < af.lambda.size(); ++i)
    worst = std::max(worst, std::abs(1.0 / af.lambda[i] - 1.0 / af.lambda[0] - static_cast<double>(i)));
  s.add("1/lambda_i - 1/lambda_0 = beta i", worst < 1e-12 && std::abs(af.lambda.back() - 0.05) < 1e-14,
        "final " + format_number(af.lambda.back()));

  auto up = rgflow::flow_stable_phi4(0.05, 1.0, 8);
  auto down = rgflow::flow_stable_phi4(up.lambda.back(), 1.0, 8, 1.0, rgflow::Direction::downward);
  worst = 0.0;
  for (std::size_t i = 0; i < up.lambda.size(); ++i) worst = std::max(worst, std::abs(down.lambda[i] / up.lambda[i] - 1.0));
  s.add("downward flow inverts upward", worst < 1e-12, "max relative gap " + format_number(worst));

  bool landau = true;
  std::string detail;
  for (double lam : {0.05, 0.1, 0.2}) {
    auto t = rgflow::flow_stable_phi4(lam, 1.0, 1000);
    landau = landau && t.blowup && std::abs(static_cast<double>(t.blowup_index) - 1.0 / lam) <= 2.0;
    detail += (detail.empty() ? "" : ", ") + str(t.blowup_index);
  }
  s.add("Landau index within 2 of 1/(beta lambda)", landau, "indices " + detail);

  rgflow::SliceParams p;
  const double kappa = std::pow(p.M, -2.0 * static_cast<double>(p.rho));
  worst = 0.0;
  for (double r : {0.01, 0.1, 1.0}) {
    const double c = rgflow::cutoff_propagator(r, kappa, p);
    worst = std::max(worst, std::abs(rgflow::sliced_sum(r, p) - c) / c);
  }
  s.add("slices telescope", worst < 1e-8, "relative error " + format_number(worst));
  return s.finish();
}

Report check_sectors(std::uint64_t) {
  Suite s("sectors --check");
  double worst = 0.0;
  for (int a = -20; a <= 20; ++a)
    for (int b = -20; b <= 20; ++b) {
      const double k1 = 0.15 * a, k2 = 0.15 * b;
      auto t = sectors::to_tilted(0.0, k1, k2);
      worst = std::max(worst, std::abs(sectors::hubbard_dispersion(k1, k2) - sectors::hubbard_dispersion_tilted(t.plus, t.minus)));
    }
  s.add("tilted dispersion identity", worst < 1e-12, "max error " + format_number(worst));

  const double M = 8.0;
  std::size_t feasible = 0, rejected = 0;
  for (std::size_t i = 1; i <= 3; ++i)
    for (std::size_t a = 0; a <= i; ++a)
      for (std::size_t b = 0; b <= i; ++b)
        for (std::size_t c = 0; c <= i; ++c)
          for (std::size_t d = 0; d <= i; ++d) {
            sectors::DirectionTuple t{{{i, a}, {i, b}, {i, c}, {i, d}}};
            if (!sectors::feasible(t, M)) continue;
            ++feasible;
            if (!sectors::check_direction(t, M).admissible) ++rejected;
          }
  s.add("conservation rule admits feasible tuples", rejected == 0,
        str(feasible) + " feasible single-slice tuples, " + str(rejected) + " rejected");

  std::size_t total = 0;
  for (std::size_t i = 1; i <= 6; ++i) total += sectors::enumerate_sectors(i).size();
  bool depth_ok = true;
  for (const auto& si : sectors::enumerate_sectors(6))
    depth_ok = depth_ok && si.depth >= 0 && si.border == ((si.category == sectors::Category::general ||
                                                           si.category == sectors::Category::diagonal) && si.depth == 0);
  s.add("sector taxonomy", depth_ok, str(total) + " sectors over i = 1..6");

  sectors::CountOptions one, three;
  three.threads = 3;
  const double c1 = sectors::count_conserving_tuples(2, 3, 2.0, one).count;
  const double c3 = sectors::count_conserving_tuples(2, 3, 2.0, three).count;
  s.add("count independent of threads", c1 == c3, "count " + format_number(c1));
  return s.finish();
}

Report check_toy(std::uint64_t) {
  Suite s("toy --check");
  bool all = true;
  std::string detail;
  for (std::size_t N : {1u, 2u})
    for (int j : {1, 3}) {
      toy::ToySpec spec;
      spec.sites = toy::parse_sites("line:2", 1);
      spec.N = N;
      spec.j = j;
      auto ex = toy::exact_log_Z(spec, 3);
      auto tr = toy::tree_expansion_pressure(spec, 3);
      all = all && ex.coefficients == tr.coefficients;
    }
  s.add("tree expansion = exact log Z", all, "line:2, N in {1,2}, j in {1,3}, n <= 3");

  bool colours = true;
  for (std::size_t n = 2; n <= 3; ++n)
    for (const auto& tree : toy::labelled_trees(n))
      for (const auto& omega : toy::contraction_choices(n, tree))
        for (std::size_t N = 1; N <= 3; ++N) {
          std::uint64_t expect = 1;
          for (std::size_t k = 0; k <= n; ++k) expect *= N;
          colours = colours && toy::count_color_assignments(n, omega, N) == expect;
        }
  s.add("colour count N^(n+1)", colours, "n in {2,3}, N <= 3");

  toy::ToySpec one;
  one.sites = toy::parse_sites("line:1", 1);
  auto p = toy::exact_log_Z(one, 3);
  s.add("Pauli: one site, one colour", p.coefficients[1] == 0 && p.coefficients[2] == 0 && p.coefficients[3] == 0,
        "p_1 = " + to_string(p.coefficients[1]));
  return s.finish();
}

}  // namespace rgkit::cli
