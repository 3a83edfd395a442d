#include "rgkit/wick/wick.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <map>
#include <numeric>
#include <thread>
#include <unordered_map>

#include "rgkit/errors.hpp"

namespace rgkit::wick {

BigInt count_pairings(long num_fields) {
  if (num_fields < 0) throw InputError("field count must be non-negative");
  if (num_fields % 2) throw InputError("odd number of fields: odd Gaussian moments vanish, no pairings exist");
  return odd_double_factorial(static_cast<unsigned>(num_fields / 2));
}

namespace {

void pair_rec(std::vector<int>& partner, Pairing& current, const std::function<void(const Pairing&)>& visit) {
  std::size_t first = 0;
  while (first < partner.size() && partner[first] >= 0) ++first;
  if (first == partner.size()) {
    visit(current);
    return;
  }
  for (std::size_t j = first + 1; j < partner.size(); ++j) {
    if (partner[j] >= 0) continue;
    partner[first] = static_cast<int>(j);
    partner[j] = static_cast<int>(first);
    current.emplace_back(first, j);
    pair_rec(partner, current, visit);
    current.pop_back();
    partner[first] = partner[j] = -1;
  }
}

template <class T>
T moment_impl(const Matrix<T>& C, const std::vector<std::size_t>& labels) {
  for (std::size_t lab : labels)
    if (lab >= C.rows() || lab >= C.cols()) throw InputError("moment label out of range");
  if (labels.size() % 2) return T(0);
  T total(0);
  for_each_pairing(labels.size(), [&](const Pairing& p) {
    T term(1);
    for (auto [a, b] : p) term *= C(labels[a], labels[b]);
    total += term;
  });
  return total;
}

// Labelled multigraph adjacency of a scheme: upper triangle (with diagonal) as bytes.
struct SchemeSpace {
  std::size_t n, N, m, vcount;
  std::size_t vertex_of(std::size_t field) const { return field < 4 * n ? field / 4 : n + (field - 4 * n); }
  graph::HalfEdge half_edge(std::size_t field) const {
    if (field < 4 * n) return {static_cast<int>(field / 4), static_cast<int>(field % 4)};
    return {static_cast<int>(n + field - 4 * n), 0};
  }
  std::size_t tri(std::size_t a, std::size_t b) const {
    if (a > b) std::swap(a, b);
    return a * vcount - a * (a - 1) / 2 + (b - a);
  }
};

struct LabelledEntry {
  std::uint64_t count = 0;
  Pairing first;
};

using LabelledMap = std::unordered_map<std::string, LabelledEntry>;

void enumerate_branch(const SchemeSpace& sp, std::size_t first_partner, LabelledMap& out) {
  std::vector<int> partner(sp.m, -1);
  std::string key(sp.vcount * (sp.vcount + 1) / 2, '\0');
  Pairing current;
  auto add = [&](std::size_t a, std::size_t b, int delta) {
    key[sp.tri(sp.vertex_of(a), sp.vertex_of(b))] = static_cast<char>(key[sp.tri(sp.vertex_of(a), sp.vertex_of(b))] + delta);
  };
  std::function<void()> rec = [&]() {
    std::size_t first = 0;
    while (first < sp.m && partner[first] >= 0) ++first;
    if (first == sp.m) {
      auto [it, inserted] = out.try_emplace(key);
      if (inserted || current < it->second.first) it->second.first = current;
      ++it->second.count;
      return;
    }
    for (std::size_t j = first + 1; j < sp.m; ++j) {
      if (partner[j] >= 0) continue;
      partner[first] = static_cast<int>(j);
      partner[j] = static_cast<int>(first);
      current.emplace_back(first, j);
      add(first, j, +1);
      rec();
      add(first, j, -1);
      current.pop_back();
      partner[first] = partner[j] = -1;
    }
  };
  if (sp.m == 0) {
    out[key].count += 1;
    return;
  }
  partner[0] = static_cast<int>(first_partner);
  partner[first_partner] = 0;
  current.emplace_back(0, first_partner);
  add(0, first_partner, +1);
  rec();
}

std::string canonical_key(const SchemeSpace& sp, const std::string& labelled) {
  std::vector<std::size_t> perm(sp.n);
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  std::string candidate(labelled.size(), '\0');
  do {
    auto img = [&](std::size_t v) { return v < sp.n ? perm[v] : v; };
    for (std::size_t a = 0; a < sp.vcount; ++a)
      for (std::size_t b = a; b < sp.vcount; ++b) candidate[sp.tri(img(a), img(b))] = labelled[sp.tri(a, b)];
    if (best.empty() || candidate < best) best = candidate;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

graph::FeynmanGraph scheme_graph(const SchemeSpace& sp, const Pairing& p) {
  std::vector<graph::Vertex> vertices;
  for (std::size_t v = 0; v < sp.n; ++v) vertices.push_back({static_cast<int>(v), graph::VertexKind::internal, 4});
  for (std::size_t e = 0; e < sp.N; ++e) vertices.push_back({static_cast<int>(sp.n + e), graph::VertexKind::external, 1});
  std::vector<graph::Line> lines;
  for (auto [a, b] : p) lines.push_back({sp.half_edge(a), sp.half_edge(b)});
  return graph::FeynmanGraph(std::move(vertices), std::move(lines));
}

}  // namespace

void for_each_pairing(std::size_t m, const std::function<void(const Pairing&)>& visit) {
  if (m % 2) return;
  std::vector<int> partner(m, -1);
  Pairing current;
  pair_rec(partner, current, visit);
}

double gaussian_moment(const Matrix<double>& C, const std::vector<std::size_t>& labels) {
  return moment_impl(C, labels);
}

Rational gaussian_moment(const Matrix<Rational>& C, const std::vector<std::size_t>& labels) {
  return moment_impl(C, labels);
}

bool is_covariance(const Matrix<double>& C, double tol) {
  if (!C.square()) return false;
  const std::size_t n = C.rows();
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(C(i, j) - C(j, i)) > tol) return false;
      m(i, j) = C(i, j);
    }
  if (n == 0) return true;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  return es.eigenvalues().minCoeff() >= -tol;
}

Rational symmetry_factor(const BigInt& multiplicity, std::size_t n) {
  if (multiplicity <= 0) throw InvariantError("multiplicity must be positive");
  BigInt group = factorial(static_cast<unsigned>(n));
  for (std::size_t k = 0; k < n; ++k) group *= 24;
  if (group % multiplicity != 0)
    throw InvariantError("(4!)^n n! = " + group.get_str() + " is not divisible by multiplicity " + multiplicity.get_str());
  return Rational(BigInt(group / multiplicity));
}

Rational symmetry_factor(const GraphClass& cls, std::size_t n) { return symmetry_factor(cls.multiplicity, n); }

Enumeration enumerate_schemes(std::size_t n, std::size_t N, const EnumerateOptions& opt) {
  const std::size_t m = 4 * n + N;
  if (m % 2) throw InputError("4n + N must be even");
  BigInt total = count_pairings(static_cast<long>(m));
  if (total.get_d() > opt.max_schemes)
    throw GuardError("(4n+N-1)!! = " + total.get_str() + " schemes exceeds the guard of " +
                     std::to_string(static_cast<long long>(opt.max_schemes)));
  if (n > 8) throw GuardError("canonical labelling by vertex permutations is limited to n <= 8");

  SchemeSpace sp{n, N, m, n + N};
  LabelledMap labelled;
  if (m == 0) {
    enumerate_branch(sp, 0, labelled);
  } else {
    const unsigned threads = std::max(1u, opt.threads);
    std::vector<LabelledMap> partial(m);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t]() {
        for (std::size_t j = 1 + t; j < m; j += threads) enumerate_branch(sp, j, partial[j]);
      });
    }
    for (auto& th : pool) th.join();
    for (std::size_t j = 1; j < m; ++j)
      for (auto& [key, entry] : partial[j]) {
        auto [it, inserted] = labelled.try_emplace(key, entry);
        if (!inserted) {
          it->second.count += entry.count;
          if (entry.first < it->second.first) it->second.first = entry.first;
        }
      }
  }

  struct ClassAcc {
    BigInt count;
    Pairing rep;
    std::string rep_labelled;
  };
  std::map<std::string, ClassAcc> classes;
  for (auto& [key, entry] : labelled) {
    std::string canon = canonical_key(sp, key);
    auto [it, inserted] = classes.try_emplace(canon);
    it->second.count += static_cast<unsigned long>(entry.count);
    if (inserted || key < it->second.rep_labelled) {
      it->second.rep_labelled = key;
      it->second.rep = entry.first;
    }
  }

  Enumeration out;
  out.n = n;
  out.N = N;
  out.total_schemes = 0;
  out.retained_schemes = 0;
  for (auto& [canon, acc] : classes) {
    GraphClass cls;
    cls.representative = scheme_graph(sp, acc.rep);
    cls.multiplicity = acc.count;
    cls.symmetry_factor = symmetry_factor(acc.count, n);
    cls.connected = cls.representative.connected();
    cls.key = canon;
    auto rep = graph::validate(cls.representative);
    for (const auto& comp : rep.components) {
      bool has_external = std::any_of(comp.begin(), comp.end(), [&](int id) {
        return cls.representative.vertex(id).kind == graph::VertexKind::external;
      });
      if (!has_external) cls.has_vacuum_component = true;
    }
    out.total_schemes += acc.count;
    if (opt.exclude_vacuum && cls.has_vacuum_component) continue;
    out.retained_schemes += acc.count;
    out.classes.push_back(std::move(cls));
  }
  if (out.total_schemes != total)
    throw InvariantError("generated " + out.total_schemes.get_str() + " schemes, expected " + total.get_str());
  return out;
}

}  // namespace rgkit::wick
