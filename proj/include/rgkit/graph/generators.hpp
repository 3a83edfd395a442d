#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rgkit/graph/feynman_graph.hpp"

namespace rgkit::graph {

using EdgeList = std::vector<std::pair<std::size_t, std::size_t>>;

// Internal vertices get ids 0..n-1; each edge (u,v) becomes a line u -> v on the lowest
// free slots. With fill_external, remaining slots up to `degree` receive one-legged
// external vertices (ids n, n+1, ...); otherwise each vertex owns exactly as many
// slots as it has incident edges.
FeynmanGraph from_skeleton(std::size_t n, const EdgeList& edges, int degree = 4, bool fill_external = true);

// Standard test graphs, phi^4-regular (free slots carry external legs).
FeynmanGraph single_line();     // two vertices, one line
FeynmanGraph bubble();          // two vertices, two parallel lines, N = 4
FeynmanGraph triangle();        // three vertices, three lines, N = 6
FeynmanGraph complete_k4();     // K4, N = 4
FeynmanGraph double_tadpole();  // one vertex, two self-lines, N = 0
FeynmanGraph sunset();          // two vertices, three parallel lines, N = 2
FeynmanGraph named_graph(const std::string& name);

// Uniform random Wick pairing of n phi^4 vertices and N external legs; retried until
// connected when require_connected is set.
FeynmanGraph random_phi4_graph(std::size_t n, std::size_t N, std::mt19937_64& rng, bool require_connected = true);

// Random connected loopless multigraph skeleton on v vertices with e >= v-1 edges.
EdgeList random_connected_multigraph(std::size_t v, std::size_t e, std::mt19937_64& rng);

}  // namespace rgkit::graph
