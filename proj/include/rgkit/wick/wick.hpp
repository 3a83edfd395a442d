#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "rgkit/graph/feynman_graph.hpp"
#include "rgkit/numeric/matrix.hpp"
#include "rgkit/numeric/rational.hpp"

namespace rgkit::wick {

using Pairing = std::vector<std::pair<std::size_t, std::size_t>>;

// (2p-1)!! for 2p fields; InputError for odd or negative counts.
BigInt count_pairings(long num_fields);

// Visits every perfect matching of {0..m-1}, always pairing the lowest free label first.
void for_each_pairing(std::size_t m, const std::function<void(const Pairing&)>& visit);

// Sum over pairings of prod C(labels[a], labels[b]); zero for odd length.
// Labels are 0-based indices into C.
double gaussian_moment(const Matrix<double>& C, const std::vector<std::size_t>& labels);
Rational gaussian_moment(const Matrix<Rational>& C, const std::vector<std::size_t>& labels);

// Symmetric with eigenvalues >= -tol.
bool is_covariance(const Matrix<double>& C, double tol = 1e-12);

struct GraphClass {
  graph::FeynmanGraph representative;
  BigInt multiplicity;
  Rational symmetry_factor;
  bool connected = false;
  bool has_vacuum_component = false;
  std::string key;  // canonical adjacency key
};

struct EnumerateOptions {
  double max_schemes = 4.0e7;
  bool exclude_vacuum = false;  // drop classes containing a vacuum component
  unsigned threads = 1;
};

struct Enumeration {
  std::size_t n = 0;
  std::size_t N = 0;
  BigInt total_schemes;      // all schemes generated, (4n+N-1)!!
  BigInt retained_schemes;   // after the vacuum filter
  std::vector<GraphClass> classes;  // sorted by canonical key
};

// All Wick schemes of n phi^4 vertices and N labelled external sources grouped by
// isomorphism (internal vertices unlabelled, externals labelled).
Enumeration enumerate_schemes(std::size_t n, std::size_t N, const EnumerateOptions& opt = {});

// S(G) = (4!)^n n! / multiplicity; InvariantError when the quotient is not an integer.
Rational symmetry_factor(const BigInt& multiplicity, std::size_t n);
Rational symmetry_factor(const GraphClass& cls, std::size_t n);

}  // namespace rgkit::wick
