#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "cliquelab/hypergraph.hpp"

namespace cliquelab {

// n(H) = (r-1)e(H) + c(H) - v(H), where v counts only covered vertices and
// c the connected components of the edge-spanned sub-hypergraph. Empty edge
// sets have nullity 0 by convention.
int64_t nullity(const UniformHypergraph& H);
int64_t nullity_of_edges(const std::vector<Edge>& edges, int arity);

// Exhaustive search for a connected sub-hypergraph with at most `max_edges`
// edges (default 2^(arity+1)) and nullity >= 2. Grows candidate subsets via
// shared-vertex adjacency; adding a connected edge never decreases nullity,
// which lets every branch stop at the first witness. Worst case explores
// every connected subset up to the cap, i.e. O(e(H) * D^max_edges) with D
// the edge-adjacency degree; sparse near-window inputs stay far below that.
std::optional<std::vector<Edge>> find_avoidable_configuration(const UniformHypergraph& H,
                                                              int max_edges = -1);

// All unordered pairs of edges sharing exactly two vertices, in canonical
// (lexicographic) order.
std::vector<std::pair<Edge, Edge>> partner_pairs(const UniformHypergraph& H);

struct CleanThreeCycle {
    std::array<Edge, 3> edges;  // lexicographically sorted triple
    Edge middle;                // the three pairwise meeting vertices
};

// Triples of 3-uniform edges on six distinct vertices where each pair meets
// in exactly one distinct vertex.
std::vector<CleanThreeCycle> clean_three_cycles(const UniformHypergraph& H);

// cl(G): the r-uniform hypergraph of all r-sets whose every arity-subset is
// an edge of G. Requires r > G.arity().
UniformHypergraph cliques(const UniformHypergraph& G, int r);

// Replace every hyperedge of H by a complete arity-s structure.
UniformHypergraph clique_expansion(const UniformHypergraph& H, int s = 2);

std::vector<int> low_degree_vertices(const UniformHypergraph& H, double g_value);

struct BadEventFlags {
    bool b1 = false;  // over-degree vertex
    bool b2 = false;  // avoidable configuration present
    bool b3 = false;  // too many low-degree vertices
    bool b4 = false;  // too many partner pairs
    bool b5 = false;  // isolated vertex

    int b1_vertex = 0;
    std::vector<Edge> b2_witness;
    std::vector<int> b3_vertices;
    size_t b4_pair_count = 0;
    int b5_vertex = 0;

    bool any() const { return b1 || b2 || b3 || b4 || b5; }
};

// B1..B5 with natural logarithms in every threshold.
BadEventFlags bad_events(const UniformHypergraph& H, double pi, double g_value);

}  // namespace cliquelab
