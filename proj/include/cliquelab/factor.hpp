#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cliquelab/hypergraph.hpp"

namespace cliquelab {

// A perfect tiling: n/r pairwise disjoint blocks covering [n].
struct Factor {
    std::vector<Edge> blocks;

    std::string to_json() const;
};

enum class SolveStatus { Found, None, BudgetExceeded };

struct SolveResult {
    SolveStatus status = SolveStatus::None;
    std::optional<Factor> factor;
    uint64_t nodes = 0;

    bool found() const { return status == SolveStatus::Found; }
};

// Exact-cover backtracking on the vertex-incidence structure, branching on
// the least-covered vertex first. Decision is exact; the node budget turns
// pathological instances into an explicit BudgetExceeded outcome.
SolveResult perfect_matching(const UniformHypergraph& H, uint64_t node_budget = 50'000'000);

// cliques(G, r) followed by perfect_matching.
SolveResult clique_factor(const UniformHypergraph& G, int r, uint64_t node_budget = 50'000'000);

}  // namespace cliquelab
