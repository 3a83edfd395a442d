#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "checks.hpp"
#include "json_config.hpp"
#include "output.hpp"
#include "rgkit/detbounds/detbounds.hpp"
#include "rgkit/errors.hpp"
#include "rgkit/forest/forest.hpp"
#include "rgkit/graph/generators.hpp"
#include "rgkit/graph/graph_json.hpp"
#include "rgkit/grassmann/grassmann.hpp"
#include "rgkit/rgflow/rgflow.hpp"
#include "rgkit/sectors/hubbard.hpp"
#include "rgkit/sectors/jellium.hpp"
#include "rgkit/simd/kernels.hpp"
#include "rgkit/symanzik/symanzik.hpp"
#include "rgkit/toy/toy_model.hpp"
#include "rgkit/wick/wick.hpp"

using namespace rgkit;
using namespace rgkit::cli;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kInvariant = 2, kGuard = 3, kInput = 4 };

struct Globals {
  std::string format = "csv";
  std::string out;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string isa = "auto";
  std::size_t max_order = 6;
  std::size_t max_generators = 16;
  int max_j = 7;
};

struct Leaf {
  CLI::App* app;
  std::function<Report()> run;
  bool has_plot = false;
};

struct Module {
  CLI::App* app;
  std::function<Report(std::uint64_t)> check;
  bool check_flag = false;
};

struct Registry {
  Globals g;
  std::vector<Leaf> leaves;
  std::vector<std::unique_ptr<Module>> modules;

  CLI::App* module(CLI::App& app, const std::string& name, const std::string& help,
                   std::function<Report(std::uint64_t)> check) {
    auto* sub = app.add_subcommand(name, help);
    auto m = std::make_unique<Module>(Module{sub, std::move(check)});
    sub->add_flag("--check", m->check_flag, "Run the module's invariant suite");
    sub->require_subcommand(0, 1);
    modules.push_back(std::move(m));
    return sub;
  }

  template <class Opts>
  std::shared_ptr<Opts> leaf(CLI::App* parent, const std::string& name, const std::string& help, bool plot,
                             std::function<void(CLI::App*, Opts&)> options, std::function<Report(const Opts&)> run) {
    auto* sub = parent->add_subcommand(name, help);
    auto opts = std::make_shared<Opts>();
    options(sub, *opts);
    leaves.push_back({sub, [opts, run] { return run(*opts); }, plot});
    return opts;
  }
};

// --- helpers ---

void guard(const char* what, double value, double limit) {
  if (value > limit) {
    std::ostringstream os;
    os << what << " = " << value << " exceeds the guard " << limit;
    throw GuardError(os.str());
  }
}

json big(const BigInt& v) {
  if (v.fits_slong_p()) return v.get_si();
  return v.get_str();
}

json exact(const Rational& q) {
  if (q.get_den() == 1) return big(q.get_num());
  return q.get_str();
}

std::string join(const std::vector<std::size_t>& v, const char* sep = " ") {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? sep : "") + std::to_string(v[k]);
  return out;
}

graph::FeynmanGraph resolve_graph(const std::string& spec) {
  if (std::filesystem::exists(spec)) return graph::load_graph(spec);
  if (spec.find('/') != std::string::npos || spec.ends_with(".json")) throw InputError("graph file '" + spec + "' not found");
  return graph::named_graph(spec);
}

Rational parse_rational(std::string cell) {
  cell.erase(0, cell.find_first_not_of(" \t"));
  cell.erase(cell.find_last_not_of(" \t") + 1);
  Rational q;
  if (cell.empty() || q.set_str(cell, 10) != 0) throw InputError("bad matrix entry '" + cell + "'");
  q.canonicalize();
  return q;
}

// JSON file holding an array of rows (numbers or "p/q" strings), or inline "a,b;c,d".
Matrix<Rational> parse_rational_matrix(const std::string& text) {
  std::vector<std::vector<Rational>> rows;
  if (std::filesystem::exists(text)) {
    std::ifstream f(text);
    const json j = json::parse(f);
    if (!j.is_array()) throw InputError("matrix file must hold an array of rows");
    for (const auto& row : j) {
      if (!row.is_array()) throw InputError("matrix rows must be arrays");
      rows.emplace_back();
      for (const auto& v : row) {
        if (v.is_string()) rows.back().push_back(parse_rational(v.get<std::string>()));
        else if (v.is_number_integer()) rows.back().push_back(Rational(v.get<long>()));
        else if (v.is_number()) rows.back().push_back(to_rational(v.get<double>()));
        else throw InputError("matrix entries must be numbers or strings");
      }
    }
  }
  std::stringstream rs(std::filesystem::exists(text) ? std::string() : text);
  std::string row;
  while (std::getline(rs, row, ';')) {
    rows.emplace_back();
    std::stringstream cs(row);
    std::string cell;
    while (std::getline(cs, cell, ',')) rows.back().push_back(parse_rational(cell));
  }
  if (rows.empty()) throw InputError("empty matrix");
  Matrix<Rational> M(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw InputError("ragged matrix");
    for (std::size_t j = 0; j < rows[i].size(); ++j) M(i, j) = rows[i][j];
  }
  return M;
}

// One d-vector per external leg in graph order: "1,0;-1,0".
std::vector<std::vector<double>> parse_momenta(const std::string& text) {
  std::vector<std::vector<double>> out;
  if (text.empty()) return out;
  std::stringstream rs(text);
  std::string row;
  while (std::getline(rs, row, ';')) {
    out.emplace_back();
    std::stringstream cs(row);
    std::string cell;
    while (std::getline(cs, cell, ',')) {
      try {
        std::size_t used = 0;
        out.back().push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::logic_error&) {
        throw InputError("bad momentum component '" + cell + "'");
      }
    }
  }
  return out;
}

json term_list(const Polynomial<BigInt>& p) {
  json out = json::array();
  for (const auto& [e, c] : p.terms()) out.push_back({{"coefficient", big(c)}, {"exponents", e}});
  return out;
}

json term_list(const Polynomial<double>& p) {
  json out = json::array();
  for (const auto& [e, c] : p.terms()) out.push_back({{"coefficient", c}, {"exponents", e}});
  return out;
}

Matrix<double> to_double(const Matrix<Rational>& A) {
  Matrix<double> D(A.rows(), A.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) D(i, j) = A(i, j).get_d();
  return D;
}

Rational small_rational(std::mt19937_64& rng) {
  Rational q(static_cast<long>(rng() % 11) - 5, static_cast<long>(1 + rng() % 4));
  q.canonicalize();
  return q;
}

std::string matrix_text(const Matrix<Rational>& A) {
  std::string s;
  for (std::size_t i = 0; i < A.rows(); ++i) {
    if (i) s += ";";
    for (std::size_t j = 0; j < A.cols(); ++j) s += (j ? "," : "") + A(i, j).get_str();
  }
  return s;
}

Plot plot(std::string title, std::string x, std::string y, std::size_t xc, std::vector<std::size_t> yc, bool log_y) {
  return Plot{std::move(title), std::move(x), std::move(y), xc, std::move(yc), log_y};
}

// --- wick ---

// "0-1 0-x2": internal vertices by id, externals prefixed with x.
std::string describe_lines(const graph::FeynmanGraph& g) {
  auto name = [&](int id) {
    return (g.vertex(id).kind == graph::VertexKind::external ? "x" : "") + std::to_string(id);
  };
  std::vector<std::string> parts;
  for (const auto& l : g.lines()) {
    std::string a = name(l.from.vertex), b = name(l.to.vertex);
    if (b < a) std::swap(a, b);
    parts.push_back(a + "-" + b);
  }
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : " ") + p;
  return out;
}

struct WickOpts {
  std::size_t n = 1, N = 0;
  bool exclude_vacuum = false;
  double max_schemes = 4.0e7;
};

void add_wick(CLI::App& app, Registry& reg) {
  auto* sub = reg.module(app, "wick", "Wick schemes grouped into Feynman graphs", check_wick);
  Globals& g = reg.g;
  reg.leaf<WickOpts>(
      sub, "enumerate", "Enumerate Wick schemes of n quartic vertices and N sources", false,
      [](CLI::App* a, WickOpts& o) {
        a->add_option("--n", o.n, "Number of quartic vertices")->capture_default_str();
        a->add_option("--N", o.N, "Number of external sources (even)")->capture_default_str();
        a->add_flag("--exclude-vacuum", o.exclude_vacuum, "Drop graphs with a vacuum component");
        a->add_option("--max-schemes", o.max_schemes, "Refuse larger enumerations")->capture_default_str();
      },
      [&g](const WickOpts& o) {
        guard("n", static_cast<double>(o.n), static_cast<double>(g.max_order));
        wick::EnumerateOptions eo;
        eo.exclude_vacuum = o.exclude_vacuum;
        eo.max_schemes = o.max_schemes;
        eo.threads = g.threads;
        auto e = wick::enumerate_schemes(o.n, o.N, eo);
        Report r;
        r.command = "wick enumerate";
        r.table.columns = {"graph", "connected", "vacuum_component", "multiplicity", "symmetry_factor"};
        const bool with_rep = g.format == "json";
        if (with_rep) r.table.columns.push_back("representative");
        // the canonical key is binary; show the representative's lines, ordered by multiplicity
        std::vector<std::pair<const wick::GraphClass*, std::string>> order;
        for (const auto& c : e.classes) order.emplace_back(&c, describe_lines(c.representative));
        std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
          if (a.first->multiplicity != b.first->multiplicity) return a.first->multiplicity < b.first->multiplicity;
          return a.second < b.second;
        });
        BigInt sum = 0;
        std::string mults;
        for (const auto& [c, lines] : order) {
          sum += c->multiplicity;
          mults += (mults.empty() ? "" : " ") + c->multiplicity.get_str();
          r.table.rows.push_back({lines, c->connected, c->has_vacuum_component, big(c->multiplicity), exact(wick::symmetry_factor(*c, o.n))});
          if (with_rep) r.table.rows.back().push_back(graph::to_json(c->representative));
        }
        r.add("n", o.n);
        r.add("N", o.N);
        r.add("schemes", big(e.total_schemes));
        r.add("retained", big(e.retained_schemes));
        r.add("classes", e.classes.size());
        r.add("multiplicities", mults);
        r.ok = sum == e.retained_schemes;
        r.add("multiplicities_sum_to_retained", r.ok);
        return r;
      });
}

// --- grassmann ---

struct MatrixOpts {
  std::string matrix;
  std::size_t random = 0;
};

Matrix<Rational> matrix_input(const MatrixOpts& o, const Globals& g, bool antisymmetric) {
  if (!o.matrix.empty()) return parse_rational_matrix(o.matrix);
  if (o.random == 0) throw InputError("give --matrix or --random SIZE");
  std::mt19937_64 rng(g.seed);
  Matrix<Rational> A(o.random, o.random);
  for (std::size_t i = 0; i < o.random; ++i)
    for (std::size_t j = antisymmetric ? i + 1 : 0; j < o.random; ++j) {
      A(i, j) = small_rational(rng);
      if (antisymmetric) A(j, i) = -A(i, j);
    }
  return A;
}

void matrix_options(CLI::App* a, MatrixOpts& o) {
  a->add_option("--matrix", o.matrix, "JSON file of rows, or inline rows separated by ';' with entries by ','");
  a->add_option("--random", o.random, "Random matrix of this size from --seed");
}

void add_grassmann(CLI::App& app, Registry& reg) {
  auto* sub = reg.module(app, "grassmann", "Exact Grassmann algebra and Berezin integrals", check_grassmann);
  Globals& g = reg.g;
  reg.leaf<MatrixOpts>(
      sub, "pfaffian", "Pfaffian of an antisymmetric matrix as a Berezin integral", false, matrix_options,
      [&g](const MatrixOpts& o) {
        auto A = matrix_input(o, g, true);
        guard("generators", static_cast<double>(A.rows()), static_cast<double>(g.max_generators));
        if (!A.square() || !grassmann::is_antisymmetric(A)) throw InputError("matrix must be square and antisymmetric");
        const Rational pf = grassmann::pfaffian(A), det = bareiss_determinant(A);
        Report r;
        r.command = "grassmann pfaffian";
        r.table.columns = {"quantity", "value"};
        r.table.rows = {{"matrix", matrix_text(A)}, {"pfaffian", exact(pf)}, {"determinant", exact(det)}};
        r.ok = pf * pf == det;
        r.add("pf_squared_equals_det", r.ok);
        return r;
      });
  reg.leaf<MatrixOpts>(
      sub, "det", "Determinant as a Grassmann Gaussian integral", false, matrix_options,
      [&g](const MatrixOpts& o) {
        auto A = matrix_input(o, g, false);
        guard("generators", 2.0 * static_cast<double>(A.rows()), static_cast<double>(g.max_generators));
        if (!A.square()) throw InputError("matrix must be square");
        const Rational berezin = grassmann::det_via_grassmann(A), det = bareiss_determinant(A);
        Report r;
        r.command = "grassmann det";
        r.table.columns = {"quantity", "value"};
        r.table.rows = {{"matrix", matrix_text(A)}, {"berezin", exact(berezin)}, {"bareiss", exact(det)}};
        r.ok = berezin == det;
        r.add("berezin_equals_det", r.ok);
        return r;
      });
}

// --- symanzik ---

struct GraphOpts {
  std::string graph = "bubble";
  std::string p;
};

struct AmplitudeOpts {
  std::string graph = "bubble";
  std::string p;
  double m2 = 1.0, d = 4.0, alpha_min = 0.0, alpha_max = 0.0, rel_tol = 1e-8;
};

void add_symanzik(CLI::App& app, Registry& reg) {
  auto* sub = reg.module(app, "symanzik", "Spanning-tree polynomials and parametric amplitudes", check_symanzik);
  Globals& g = reg.g;
  reg.leaf<GraphOpts>(
      sub, "poly", "Spanning trees, U and V polynomials, deletion-contraction", false,
      [](CLI::App* a, GraphOpts& o) {
        a->alias("polynomials");
        a->add_option("--graph", o.graph, "Graph JSON file or built-in name")->capture_default_str();
        a->add_option("--p", o.p, "External momenta for V, one vector per external leg: \"1,0;-1,0\"");
      },
      [](const GraphOpts& o) {
        auto fg = resolve_graph(o.graph);
        auto m = symanzik::Multigraph::from_graph(fg);
        if (!m.connected()) throw DomainError("graph skeleton is disconnected");
        auto trees = symanzik::spanning_trees(m);
        Report r;
        r.command = "symanzik poly";
        r.table.columns = {"tree", "lines", "complement"};
        for (std::size_t t = 0; t < trees.size(); ++t) {
          std::vector<std::size_t> rest;
          for (std::size_t k = 0; k < m.edges.size(); ++k)
            if (std::find(trees[t].begin(), trees[t].end(), k) == trees[t].end()) rest.push_back(k);
          r.table.rows.push_back({t, join(trees[t]), join(rest)});
        }
        const BigInt kirchhoff = symanzik::kirchhoff_tree_count(m);
        bool dc = true;
        for (std::size_t k = 0; k < m.edges.size(); ++k)
          if (!m.is_tadpole(k)) dc = dc && symanzik::deletion_contraction_holds(m, k);
        const auto U = symanzik::spanning_tree_polynomial(m);
        r.add("U", U.to_string());
        r.add("U_terms", term_list(U));
        if (!o.p.empty()) {
          const auto V = symanzik::second_symanzik(fg, parse_momenta(o.p));
          r.add("V", V.to_string());
          r.add("V_terms", term_list(V));
        }
        r.add("trees", trees.size());
        r.add("kirchhoff", big(kirchhoff));
        r.add("deletion_contraction", dc);
        r.ok = dc && kirchhoff == BigInt(static_cast<unsigned long>(trees.size()));
        return r;
      });
  reg.leaf<AmplitudeOpts>(
      sub, "amplitude", "Parametric amplitude", false,
      [](CLI::App* a, AmplitudeOpts& o) {
        a->add_option("--graph", o.graph, "Graph JSON file or built-in name")->capture_default_str();
        a->add_option("--p", o.p, "External momenta, one vector per external leg; zero when absent");
        a->add_option("--m2", o.m2, "Mass squared")->capture_default_str();
        a->add_option("--d", o.d, "Dimension")->capture_default_str();
        a->add_option("--alpha-min", o.alpha_min, "UV regulator on every Schwinger parameter")->capture_default_str();
        a->add_option("--alpha-max", o.alpha_max, "IR cut, 0 for none")->capture_default_str();
        a->add_option("--rel-tol", o.rel_tol, "Quadrature tolerance")->capture_default_str();
      },
      [&g](const AmplitudeOpts& o) {
        (void)g;
        auto fg = resolve_graph(o.graph);
        symanzik::AmplitudeParams p;
        p.m2 = o.m2;
        p.d = o.d;
        p.alpha_min = o.alpha_min;
        p.alpha_max = o.alpha_max;
        p.rel_tol = o.rel_tol;
        auto a = symanzik::parametric_amplitude(fg, parse_momenta(o.p), p);
        Report r;
        r.command = "symanzik amplitude";
        r.table.columns = {"graph", "value", "error", "evaluations", "uv_degree"};
        r.table.rows.push_back({o.graph, a.value, a.error, a.evaluations, a.ultraviolet_degree});
        return r;
      });
  reg.leaf<MatrixOpts>(
      sub, "tree-matrix", "det of the minor A^11 against the directed-tree sum", false, matrix_options,
      [&g](const MatrixOpts& o) {
        Matrix<Rational> A;
        if (!o.matrix.empty()) {
          A = parse_rational_matrix(o.matrix);
        } else {
          if (o.random == 0) throw InputError("give --matrix or --random SIZE");
          std::mt19937_64 rng(g.seed);
          A = Matrix<Rational>(o.random, o.random);
          for (std::size_t j = 0; j < o.random; ++j) {
            Rational col(0);
            for (std::size_t i = 0; i < o.random; ++i)
              if (i != j) {
                A(i, j) = small_rational(rng);
                col += A(i, j);
              }
            A(j, j) = -col;
          }
        }
        auto t = symanzik::tree_matrix_check(A);
        Report r;
        r.command = "symanzik tree-matrix";
        r.table.columns = {"quantity", "value"};
        r.table.rows = {{"matrix", matrix_text(A)}, {"minor_det", exact(t.minor_det)}, {"tree_sum", exact(t.tree_sum)}, {"trees", t.trees}};
        r.ok = t.equal();
        r.add("equal", r.ok);
        return r;
      });
}

// --- forest ---

struct WeightsOpts {
  std::string graph = "bubble";
  std::string method = "auto";
  std::size_t samples = 200000;
};

struct FormulaOpts {
  std::size_t n = 3;
  std::vector<double> coeffs;
};

void add_forest(CLI::App& app, Registry& reg) {
  auto* sub = reg.module(app, "forest", "Tree and forest interpolation weights", check_forest);
  Globals& g = reg.g;
  reg.leaf<WeightsOpts>(
      sub, "weights", "Weights w(G,T) of the spanning trees and their sum", false,
      [](CLI::App* a, WeightsOpts& o) {
        a->add_option("--graph", o.graph, "Graph JSON file or built-in name")->capture_default_str();
        a->add_option("--method", o.method, "auto, exact or mc")->check(CLI::IsMember({"auto", "exact", "mc"}))->capture_default_str();
        a->add_option("--samples", o.samples, "Monte Carlo samples per tree")->capture_default_str();
      },
      [&g](const WeightsOpts& o) {
        auto fg = resolve_graph(o.graph);
        forest::WeightOptions wo;
        wo.method = o.method == "exact" ? forest::Method::exact : o.method == "mc" ? forest::Method::monte_carlo : forest::Method::automatic;
        wo.samples = o.samples;
        wo.seed = g.seed;
        auto b = forest::barycentric_check(fg, wo);
        Report r;
        r.command = "forest weights";
        r.table.columns = {"tree", "lines", "weight", "exact_weight", "ci_half_width"};
        for (std::size_t t = 0; t < b.rows.size(); ++t) {
          const auto& w = b.rows[t].weight;
          r.table.rows.push_back({"T" + std::to_string(t + 1), join(b.rows[t].tree), w.value,
                                  w.exact ? exact(w.exact_value) : json(nullptr), w.ci_half_width});
        }
        r.add("sum", b.forest_sum);
        r.add("exact", b.exact);
        if (b.exact) {
          r.add("exact_sum", exact(b.exact_sum));
          r.ok = b.exact_sum == 1;
        } else {
          // three half-widths: a 95% interval misses one in twenty honest runs
          r.add("ci_half_width", b.ci_half_width);
          r.ok = std::abs(b.forest_sum - 1.0) <= 3.0 * b.ci_half_width;
        }
        r.add("component_product", b.component_product);
        return r;
      });
  reg.leaf<FormulaOpts>(
      sub, "formula", "Forest formula on f = exp(sum c_ij x_ij)", false,
      [](CLI::App* a, FormulaOpts& o) {
        a->add_option("--n", o.n, "Number of points, at most 5")->capture_default_str();
        a->add_option("--coeffs", o.coeffs, "c_ij in lexicographic pair order; random from --seed when absent");
      },
      [&g](const FormulaOpts& o) {
        std::vector<double> c = o.coeffs;
        if (o.n < 2) throw InputError("--n must be at least 2");
        if (c.empty()) {
          std::mt19937_64 rng(g.seed);
          std::uniform_real_distribution<double> u(-1, 1);
          c.resize(o.n * (o.n - 1) / 2);
          for (auto& x : c) x = u(rng);
        }
        if (c.size() != o.n * (o.n - 1) / 2) throw InputError("--coeffs needs n(n-1)/2 values");
        auto f = forest::forest_formula_verify(o.n, c);
        Report r;
        r.command = "forest formula";
        r.table.columns = {"n", "forests", "lhs", "rhs", "relative_error"};
        r.table.rows.push_back({o.n, f.forests, f.lhs, f.rhs, f.relative_error()});
        r.ok = f.relative_error() < 1e-6;
        return r;
      });
}

// --- bounds ---

struct SweepOpts {
  std::size_t trials = 10000;
  std::size_t max_size = 10;
};

void add_bounds(CLI::App& app, Registry& reg) {
  auto* sub = reg.module(app, "bounds", "Gram and Hadamard determinant bounds", check_bounds);
  Globals& g = reg.g;
  reg.leaf<MatrixOpts>(
      sub, "report", "Gram and Hadamard-type bounds for one matrix", false,
      [](CLI::App* a, MatrixOpts& o) {
        a->alias("hadamard");
        matrix_options(a, o);
        a->add_option("--sylvester", o.random, "Use the Sylvester Hadamard matrix of this order instead");
      },
      [&g](const MatrixOpts& o) {
        Matrix<double> A;
        if (!o.matrix.empty()) A = to_double(parse_rational_matrix(o.matrix));
        else if (o.random) A = detbounds::sylvester_hadamard(o.random);
        else throw InputError("give --matrix or --sylvester ORDER");
        if (!A.square()) throw InputError("matrix must be square");
        (void)g;
        auto h = detbounds::hadamard_bounds(A);
        auto gr = detbounds::gram_bound(detbounds::row_factorization(A));
        Report r;
        r.command = "bounds report";
        r.table.columns = {"bound", "value", "holds"};
        r.table.rows = {{"|det|", h.abs_det, true},
                        {"row", h.row_bound, h.row_holds},
                        {"column", h.col_bound, h.col_holds},
                        {"sup", h.sup_bound, h.sup_holds},
                        {"naive n!", h.naive_bound, h.sup_below_naive},
                        {"gram", gr.bound, gr.holds}};
        r.ok = h.all_hold() && gr.holds;
        r.add("sup_tight", detbounds::within(h.sup_bound, h.abs_det));
        return r;
      });
  reg.leaf<SweepOpts>(
      sub, "sweep", "Random matrices against every bound", false,
      [](CLI::App* a, SweepOpts& o) {
        a->add_option("--trials", o.trials, "Number of matrices")->capture_default_str();
        a->add_option("--max-size", o.max_size, "Sizes run over 2..max-size")->capture_default_str();
      },
      [&g](const SweepOpts& o) {
        if (o.max_size < 2) throw InputError("--max-size must be at least 2");
        std::mt19937_64 rng(g.seed);
        std::uniform_real_distribution<double> u(-1, 1);
        const std::size_t sizes = o.max_size - 1;
        std::vector<std::size_t> tried(sizes), bad(sizes);
        std::vector<double> worst(sizes);
        for (std::size_t t = 0; t < o.trials; ++t) {
          const std::size_t k = t % sizes, n = 2 + k;
          Matrix<double> A(n, n);
          for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) A(i, j) = u(rng);
          auto h = detbounds::hadamard_bounds(A);
          ++tried[k];
          if (!h.all_hold() || !detbounds::gram_bound(detbounds::row_factorization(A)).holds) ++bad[k];
          worst[k] = std::max(worst[k], h.abs_det / h.row_bound);
        }
        Report r;
        r.command = "bounds sweep";
        r.table.columns = {"size", "matrices", "violations", "max_det_over_row_bound"};
        std::size_t total = 0;
        for (std::size_t k = 0; k < sizes; ++k) {
          r.table.rows.push_back({k + 2, tried[k], bad[k], worst[k]});
          total += bad[k];
        }
        r.add("violations", total);
        r.ok = total == 0;
        return r;
      });
}

// --- flow ---

struct FlowOpts {
  std::string kind = "af";
  double lambda0 = 0.1, beta = 1.0, gamma = 0.0, threshold = 1.0;
  std::size_t steps = 10;
  std::string direction = "up";
};

struct RenormalonOpts {
  std::size_t n_max = 16;
  double m2 = 1.0;
};

struct SliceOpts {
  double d = 4.0, M = 2.0, m2 = 1.0;
  std::size_t i_max = 8;
};

void add_flow(CLI::App& app, Registry& reg) {
  auto* sub = reg.module(app, "flow", "Discrete RG flows, slice propagators, renormalons", check_flow);
  reg.leaf<FlowOpts>(
      sub, "run", "Iterate a coupling flow", true,
      [](CLI::App* a, FlowOpts& o) {
        a->add_option("--kind", o.kind, "af (asymptotically free) or phi4")->check(CLI::IsMember({"af", "phi4"}))->capture_default_str();
        a->add_option("--lambda0", o.lambda0, "Starting coupling")->capture_default_str();
        a->add_option("--beta", o.beta, "One-loop coefficient")->capture_default_str();
        a->add_option("--gamma", o.gamma, "Logarithmic correction (af only)")->capture_default_str();
        a->add_option("--steps", o.steps, "Number of steps")->capture_default_str();
        a->add_option("--threshold", o.threshold, "Blow-up threshold (phi4 only)")->capture_default_str();
        a->add_option("--direction", o.direction, "up or down (phi4 only)")->check(CLI::IsMember({"up", "down"}))->capture_default_str();
      },
      [](const FlowOpts& o) {
        Report r;
        if (o.kind == "af") {
          auto t = rgflow::flow_asymptotically_free(o.lambda0, o.beta, o.gamma, o.steps);
          r.command = "flow run af";
          r.table.columns = {"i", "lambda", "second_order", "third_order"};
          double worst = 0.0;
          for (std::size_t i = 0; i < t.lambda.size(); ++i) {
            r.table.rows.push_back({i, t.lambda[i], t.second_order[i], t.third_order[i]});
            worst = std::max(worst, std::abs(t.third_order[i] / t.lambda[i] - 1.0));
          }
          r.add("final_lambda", t.lambda.back());
          r.ok = worst < 1e-9;
          r.add("closed_form_max_rel_gap", worst);
          r.plots.push_back(plot("asymptotically free flow", "i", "lambda_i", 0, {1, 2}, false));
        } else {
          const auto dir = o.direction == "up" ? rgflow::Direction::upward : rgflow::Direction::downward;
          auto t = rgflow::flow_stable_phi4(o.lambda0, o.beta, o.steps, o.threshold, dir);
          r.command = "flow run phi4";
          r.table.columns = {"i", "lambda"};
          for (std::size_t i = 0; i < t.lambda.size(); ++i) r.table.rows.push_back({i, t.lambda[i]});
          r.add("final_lambda", t.lambda.back());
          if (dir == rgflow::Direction::upward) {
            r.add("blowup", t.blowup);
            r.add("blowup_index", t.blowup_index);
            r.add("index_above_1e3", t.index_above_1e3);
            r.add("predicted_index", t.predicted_index);
          }
          r.plots.push_back(plot("stable phi^4 flow", "i", "lambda_i", 0, {1}, true));
        }
        return r;
      });
  reg.leaf<RenormalonOpts>(
      sub, "renormalon", "Log-moment integrals and their growth ratios", true,
      [](CLI::App* a, RenormalonOpts& o) {
        a->add_option("--nmax", o.n_max, "Largest moment, at most 20")->capture_default_str();
        a->add_option("--m2", o.m2, "Mass squared")->capture_default_str();
      },
      [](const RenormalonOpts& o) {
        auto rows = rgflow::renormalon_growth(o.n_max, o.m2);
        Report r;
        r.command = "flow renormalon";
        r.table.columns = {"n", "value", "ratio", "plain_value", "plain_ratio"};
        for (const auto& x : rows) r.table.rows.push_back({x.n, x.value, x.ratio, x.plain_value, x.plain_ratio});
        if (o.n_max >= 15) r.add("drift_10_15", rgflow::plateau_drift(rows, 10, 15));
        r.plots.push_back(plot("I_n / (n I_{n-1})", "n", "ratio", 0, {2, 4}, false));
        return r;
      });
  reg.leaf<SliceOpts>(
      sub, "slices", "Uniformity constant K(i) of the slice propagators", true,
      [](CLI::App* a, SliceOpts& o) {
        a->add_option("--d", o.d, "Dimension")->capture_default_str();
        a->add_option("--M", o.M, "Slice ratio")->capture_default_str();
        a->add_option("--m2", o.m2, "Mass squared")->capture_default_str();
        a->add_option("--imax", o.i_max, "Deepest slice")->capture_default_str();
      },
      [](const SliceOpts& o) {
        rgflow::SliceParams p;
        p.d = o.d;
        p.M = o.M;
        p.m2 = o.m2;
        Report r;
        r.command = "flow slices";
        r.table.columns = {"i", "K", "r_star"};
        double lo = INFINITY, hi = 0.0;
        for (std::size_t i = 1; i <= o.i_max; ++i) {
          auto b = rgflow::slice_bound(i, p);
          r.table.rows.push_back({i, b.K, b.r_star});
          lo = std::min(lo, b.K);
          hi = std::max(hi, b.K);
        }
        r.add("K_spread", hi / lo);
        r.plots.push_back(plot("slice bound constant", "i", "K(i)", 0, {1}, false));
        return r;
      });
}

// --- sectors ---

struct CountOpts {
  std::string j;
  std::size_t dim = 2;
  int j_lo = 1, j_hi = 5;
  double M = 2.0, c_tol = 1.0;
  std::string mode = "isotropic";
};

struct HubbardOpts {
  std::size_t i = 4;
  double M = 2.0;
  bool list = false;
  bool components = false;
  std::size_t grid = 1024;
};

struct DecayOpts {
  std::size_t i = 4, s_plus = 2, s_minus = 2, samples = 20;
  double beta = 1000.0, M = 2.0, alpha = 0.5, d_max = 12.0;
  bool prefactor = false;
};

void add_sectors(CLI::App& app, Registry& reg) {
  auto* sub = reg.module(app, "sectors", "Fermi-surface sectors: jellium counting and Hubbard", check_sectors);
  Globals& g = reg.g;
  reg.leaf<CountOpts>(
      sub, "count", "Momentum-conserving sector quadruples against j", true,
      [](CLI::App* a, CountOpts& o) {
        a->add_option("--dim", o.dim, "2 or 3")->check(CLI::IsMember({2, 3}))->capture_default_str();
        a->add_option("--j", o.j, "Scale or range lo..hi (overrides --j-lo and --j-hi)");
        a->add_option("--j-lo", o.j_lo, "First scale")->capture_default_str();
        a->add_option("--j-hi", o.j_hi, "Last scale")->capture_default_str();
        a->add_option("--M", o.M, "Scale ratio")->capture_default_str();
        a->add_option("--c-tol", o.c_tol, "Conservation tolerance constant")->capture_default_str();
        a->add_option("--mode", o.mode, "isotropic or anisotropic (2D)")->check(CLI::IsMember({"isotropic", "anisotropic"}))->capture_default_str();
      },
      [&g](const CountOpts& in) {
        CountOpts o = in;
        if (!o.j.empty()) {
          const auto dots = o.j.find("..");
          try {
            o.j_lo = std::stoi(o.j.substr(0, dots));
            o.j_hi = dots == std::string::npos ? o.j_lo : std::stoi(o.j.substr(dots + 2));
          } catch (const std::logic_error&) {
            throw InputError("--j takes N or LO..HI");
          }
        }
        if (o.j_hi < o.j_lo) throw InputError("empty scale range");
        guard("j", o.j_hi, g.max_j);
        sectors::CountOptions co;
        co.c_tol = o.c_tol;
        co.threads = g.threads;
        const auto mode = o.mode == "isotropic" ? sectors::SectorMode::isotropic : sectors::SectorMode::anisotropic;
        Report r;
        r.command = "sectors count";
        r.table.columns = {"j", "sectors", "reach", "count", "bound", "count_over_bound"};
        if (o.j_hi > o.j_lo) {
          auto f = sectors::fit_count_slope(o.dim, o.j_lo, o.j_hi, o.M, co, mode);
          for (const auto& x : f.rows) r.table.rows.push_back({x.j, x.sectors, x.reach, x.count, x.bound, x.count / x.bound});
          r.add("slope", f.slope);
          r.add("intercept", f.intercept);
        } else {
          auto x = sectors::count_conserving_tuples(o.dim, o.j_lo, o.M, co, mode);
          r.table.rows.push_back({x.j, x.sectors, x.reach, x.count, x.bound, x.count / x.bound});
        }
        r.plots.push_back(plot("conserving quadruples", "j", "count", 0, {3, 4}, true));
        return r;
      });
  reg.leaf<HubbardOpts>(
      sub, "hubbard", "Sector taxonomy of a Hubbard slice", false,
      [](CLI::App* a, HubbardOpts& o) {
        a->add_option("--i", o.i, "Slice index")->capture_default_str();
        a->add_flag("--list", o.list, "One row per sector instead of per category");
        a->add_flag("--components", o.components, "Count connected components of each support (with --list)");
        a->add_option("--M", o.M, "Scale ratio for --components")->capture_default_str();
        a->add_option("--grid", o.grid, "Grid size for --components")->capture_default_str();
      },
      [&g](const HubbardOpts& o) {
        guard("i", static_cast<double>(o.i), g.max_j);
        auto all = sectors::enumerate_sectors(o.i);
        Report r;
        r.command = "sectors hubbard";
        if (o.list) {
          r.table.columns = {"s_plus", "s_minus", "depth", "category", "border"};
          if (o.components) r.table.columns.push_back("components");
          for (const auto& s : all) {
            std::vector<json> row{s.s_plus, s.s_minus, s.depth, sectors::to_string(s.category), s.border};
            if (o.components) row.push_back(sectors::sector_components(o.i, s.s_plus, s.s_minus, o.M, o.grid));
            r.table.rows.push_back(std::move(row));
          }
        } else {
          r.table.columns = {"category", "sectors", "border"};
          for (auto c : {sectors::Category::middle_face, sectors::Category::face, sectors::Category::corner,
                         sectors::Category::diagonal, sectors::Category::general}) {
            std::size_t n = 0, b = 0;
            for (const auto& s : all)
              if (s.category == c) {
                ++n;
                b += s.border;
              }
            r.table.rows.push_back({sectors::to_string(c), n, b});
          }
        }
        r.add("i", o.i);
        r.add("sectors", all.size());
        return r;
      });
  reg.leaf<DecayOpts>(
      sub, "decay", "Position-space decay of one Hubbard sector propagator", true,
      [](CLI::App* a, DecayOpts& o) {
        a->add_option("--i", o.i, "Slice index")->capture_default_str();
        a->add_option("--s-plus,--splus", o.s_plus, "Sector index along e+")->capture_default_str();
        a->add_option("--s-minus,--sminus", o.s_minus, "Sector index along e-")->capture_default_str();
        a->add_option("--beta", o.beta, "Inverse temperature")->capture_default_str();
        a->add_option("--M", o.M, "Scale ratio")->capture_default_str();
        a->add_option("--alpha", o.alpha, "Stretched-exponential exponent")->capture_default_str();
        a->add_option("--samples", o.samples, "Distances sampled")->capture_default_str();
        a->add_option("--d-max", o.d_max, "Largest scaled distance")->capture_default_str();
        a->add_flag("--prefactor", o.prefactor, "Sweep all sectors of slice i for the scaled prefactor instead");
      },
      [&g](const DecayOpts& o) {
        guard("i", static_cast<double>(o.i), g.max_j);
        sectors::DecayParams p;
        p.beta = o.beta;
        p.M = o.M;
        p.alpha = o.alpha;
        Report r;
        if (o.prefactor) {
          auto s = sectors::prefactor_sweep(o.i, p);
          r.command = "sectors decay --prefactor";
          r.table.columns = {"s_plus", "s_minus", "category", "border", "sup_abs", "scaled", "l1", "l1_scaled"};
          for (const auto& x : s.rows)
            r.table.rows.push_back({x.sector.s_plus, x.sector.s_minus, sectors::to_string(x.sector.category), x.sector.border,
                                    x.sup_abs, x.scaled, x.l1, x.l1_scaled});
          r.add("band", s.band());
          r.add("interior_band", s.interior_band());
          r.add("l1_band", s.l1_band());
          r.plots.push_back(plot("scaled sector prefactors", "s_plus", "scaled", 0, {5}, true));
          return r;
        }
        auto f = sectors::decay_fit(o.i, o.s_plus, o.s_minus, p, o.samples, o.d_max);
        r.command = "sectors decay";
        r.table.columns = {"distance", "distance_alpha", "abs_value"};
        for (std::size_t k = 0; k < f.distance.size(); ++k)
          r.table.rows.push_back({f.distance[k], std::pow(f.distance[k], o.alpha), f.abs_value[k]});
        r.add("slope", f.slope);
        r.add("intercept", f.intercept);
        r.plots.push_back(plot("sector propagator decay", "d^alpha", "|C|", 1, {2}, true));
        return r;
      });
}

// --- toy ---

struct PressureOpts {
  std::string sites = "line:2";
  std::size_t dim = 1, N = 2, n_max = 3;
  int j = 1;
  double M = 2.0;
  bool compare_exact = false;
};

struct UniformOpts {
  std::string sites = "line:2";
  std::size_t dim = 1, n_max = 3;
  std::vector<int> js{1, 3, 5};
  std::vector<std::size_t> Ns{1, 2};
  double M = 2.0;
};

struct GramOpts {
  std::string sites = "line:3";
  std::size_t dim = 1, N = 2, n = 3, samples = 200;
  int j = 1;
  double M = 2.0;
};

toy::ToySpec toy_spec(const std::string& sites, std::size_t dim, std::size_t N, int j, double M) {
  toy::ToySpec s;
  s.sites = toy::parse_sites(sites, dim);
  s.dim = dim;
  s.N = N;
  s.j = j;
  s.M = M;
  return s;
}

void add_toy(CLI::App& app, Registry& reg) {
  auto* sub = reg.module(app, "toy", "Single-slice N-colour fermion model", check_toy);
  Globals& g = reg.g;
  auto site_options = [](CLI::App* a, std::string& sites, std::size_t& dim, double& M) {
    a->add_option("--sites", sites, "line:S, grid:S or x,y;x,y;... in slice units")->capture_default_str();
    a->add_option("--dim", dim, "Spatial dimension")->capture_default_str();
    a->add_option("--M", M, "Scale ratio")->capture_default_str();
  };
  reg.leaf<PressureOpts>(
      sub, "pressure", "Pressure coefficients from the tree expansion", true,
      [site_options](CLI::App* a, PressureOpts& o) {
        site_options(a, o.sites, o.dim, o.M);
        a->add_option("--N", o.N, "Colours")->capture_default_str();
        a->add_option("--j", o.j, "Scale")->capture_default_str();
        a->add_option("--nmax", o.n_max, "Highest order, at most 4")->capture_default_str();
        a->add_flag("--compare-exact", o.compare_exact, "Also expand the Berezin integral exactly");
      },
      [&g](const PressureOpts& o) {
        guard("nmax", static_cast<double>(o.n_max), static_cast<double>(g.max_order));
        guard("j", o.j, g.max_j);
        auto spec = toy_spec(o.sites, o.dim, o.N, o.j, o.M);
        if (o.compare_exact)
          guard("generators", 2.0 * static_cast<double>(spec.sites.size() * o.N), static_cast<double>(g.max_generators));
        auto tree = toy::tree_expansion_pressure(spec, o.n_max);
        Report r;
        r.command = "toy pressure";
        r.table.columns = {"n", "coefficient", "value", "abs_value"};
        toy::PressureSeries ex;
        if (o.compare_exact) {
          ex = toy::exact_log_Z(spec, o.n_max);
          r.table.columns.insert(r.table.columns.end(), {"exact", "equal"});
        }
        for (std::size_t n = 1; n < tree.coefficients.size(); ++n) {
          std::vector<json> row{n, exact(tree.coefficients[n]), tree.values[n], std::abs(tree.values[n])};
          if (o.compare_exact) {
            const bool eq = ex.coefficients[n] == tree.coefficients[n];
            row.push_back(exact(ex.coefficients[n]));
            row.push_back(eq);
            r.ok = r.ok && eq;
          }
          r.table.rows.push_back(std::move(row));
        }
        r.add("volume", exact(toy::volume(spec)));
        r.plots.push_back(plot("pressure coefficients", "n", "|p_n|", 0, {3}, true));
        return r;
      });
  reg.leaf<UniformOpts>(
      sub, "uniformity", "Normalized |p_n|^(1/n) across scales and colours", false,
      [site_options](CLI::App* a, UniformOpts& o) {
        site_options(a, o.sites, o.dim, o.M);
        a->add_option("--js", o.js, "Scales")->capture_default_str();
        a->add_option("--Ns", o.Ns, "Colour counts")->capture_default_str();
        a->add_option("--nmax", o.n_max, "Highest order, at most 4")->capture_default_str();
      },
      [&g](const UniformOpts& o) {
        guard("nmax", static_cast<double>(o.n_max), static_cast<double>(g.max_order));
        for (int j : o.js) guard("j", j, g.max_j);
        auto rows = toy::uniformity(toy::parse_sites(o.sites, o.dim), o.dim, o.js, o.Ns, o.M, o.n_max);
        Report r;
        r.command = "toy uniformity";
        r.table.columns = {"n", "min", "max", "ratio", "pauli_zeros"};
        double worst = 0.0;
        for (const auto& x : rows) {
          r.table.rows.push_back({x.n, x.min_normalized, x.max_normalized, x.ratio(), x.zeros});
          worst = std::max(worst, x.ratio());
        }
        r.add("max_ratio", worst);
        return r;
      });
  reg.leaf<GramOpts>(
      sub, "gram", "Remaining minors of the tree formula against the weakened Gram bound", false,
      [site_options](CLI::App* a, GramOpts& o) {
        site_options(a, o.sites, o.dim, o.M);
        a->add_option("--N", o.N, "Colours")->capture_default_str();
        a->add_option("--j", o.j, "Scale")->capture_default_str();
        a->add_option("--n", o.n, "Order")->capture_default_str();
        a->add_option("--samples", o.samples, "Random draws")->capture_default_str();
      },
      [&g](const GramOpts& o) {
        guard("n", static_cast<double>(o.n), static_cast<double>(g.max_order));
        auto a = toy::gram_audit(toy_spec(o.sites, o.dim, o.N, o.j, o.M), o.n, o.samples, g.seed);
        Report r;
        r.command = "toy gram";
        r.table.columns = {"checked", "violations", "worst_ratio"};
        r.table.rows.push_back({a.checked, a.violations, a.worst_ratio});
        r.ok = a.violations == 0;
        return r;
      });
}

void emit(const Report& r, const Globals& g) {
  std::ostringstream os;
  if (g.format == "json") write_json(os, r);
  else if (g.format == "svg") write_svg(os, r);
  else write_csv(os, r);
  if (g.out.empty()) {
    std::cout << os.str();
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw InputError("cannot write '" + g.out + "'");
  f << os.str();
}

int run(int argc, char** argv) {
  Registry reg;
  Globals& g = reg.g;
  CLI::App app{"rgkit: constructive renormalization toolkit"};
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file mirroring the flags (flags win)");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.fallthrough();
  auto* fmt = app.add_option("--format", g.format, "csv, json or svg")->check(CLI::IsMember({"csv", "json", "svg"}))->capture_default_str();
  app.add_flag_callback("--json", [&g] { g.format = "json"; }, "Same as --format json")->excludes(fmt);
  app.add_flag_callback("--csv", [&g] { g.format = "csv"; }, "Same as --format csv")->excludes(fmt);
  app.add_option("--out", g.out, "Write to this file instead of stdout");
  app.add_option("--seed", g.seed, "Seed for every random draw")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads where a module supports them")->check(CLI::Range(1u, 256u))->capture_default_str();
  app.add_option("--isa", g.isa, "Kernel target: auto, scalar or avx2")->check(CLI::IsMember({"auto", "scalar", "avx2"}))->capture_default_str();
  app.add_option("--max-order", g.max_order, "Guard on perturbative order")->capture_default_str();
  app.add_option("--max-generators", g.max_generators, "Guard on Grassmann generators")->capture_default_str();
  app.add_option("--max-j", g.max_j, "Guard on scale indices")->capture_default_str();

  add_wick(app, reg);
  add_grassmann(app, reg);
  add_symanzik(app, reg);
  add_forest(app, reg);
  add_bounds(app, reg);
  add_flow(app, reg);
  add_sectors(app, reg);
  add_toy(app, reg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  if (g.isa == "scalar") simd::set_isa(simd::Isa::scalar);
  else if (g.isa == "avx2") simd::set_isa(simd::Isa::avx2);

  for (const auto& m : reg.modules) {
    if (!m->app->parsed()) continue;
    const Leaf* chosen = nullptr;
    for (const auto& l : reg.leaves)
      if (l.app->parsed() && l.app->get_parent() == m->app) chosen = &l;
    Report r;
    if (m->check_flag) {
      if (g.format == "svg") throw InputError("--check has no plot; use --format csv or json");
      r = m->check(g.seed);
    } else if (chosen) {
      if (g.format == "svg" && !chosen->has_plot) throw InputError("'" + chosen->app->get_name() + "' has no plot; use --format csv or json");
      r = chosen->run();
    } else {
      std::cerr << m->app->help();
      return kInput;
    }
    emit(r, g);
    if (!r.ok) {
      std::cerr << "invariant check failed in '" << r.command << "'\n";
      return kInvariant;
    }
    return kOk;
  }
  return kInput;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const InvariantError& e) {
    std::cerr << "invariant: " << e.what() << "\n";
    return kInvariant;
  } catch (const GuardError& e) {
    std::cerr << "guard: " << e.what() << "\n";
    return kGuard;
  } catch (const InputError& e) {
    std::cerr << "input: " << e.what() << "\n";
    return kInput;
  } catch (const DomainError& e) {
    std::cerr << "domain: " << e.what() << "\n";
    return kInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
