#include "cliquelab/factor.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"

#include "cliquelab/detectors.hpp"

namespace cliquelab {

std::string Factor::to_json() const {
    nlohmann::json j = blocks;
    return j.dump();
}

namespace {

struct CoverSearch {
    const UniformHypergraph& H;
    std::vector<std::vector<int>> incident;  // vertex -> edge indices
    std::vector<char> used_vertex;
    std::vector<int> picked;
    uint64_t budget;
    uint64_t nodes = 0;
    bool exhausted = false;

    explicit CoverSearch(const UniformHypergraph& h, uint64_t b)
        : H(h), incident(h.n() + 1), used_vertex(h.n() + 1, 0), budget(b) {
        for (size_t i = 0; i < h.size(); ++i)
            for (int v : h.edge(i)) incident[v].push_back(static_cast<int>(i));
    }

    bool edge_free(int ei) const {
        for (int v : H.edge(static_cast<size_t>(ei)))
            if (used_vertex[v]) return false;
        return true;
    }

    bool solve(int uncovered) {
        if (uncovered == 0) return true;
        if (++nodes > budget) {
            exhausted = true;
            return false;
        }
        // fail-first: branch on the uncovered vertex with fewest usable edges
        int best_v = 0, best_count = -1;
        for (int v = 1; v <= H.n(); ++v) {
            if (used_vertex[v]) continue;
            int count = 0;
            for (int ei : incident[v])
                if (edge_free(ei)) ++count;
            if (best_count < 0 || count < best_count) {
                best_count = count;
                best_v = v;
                if (count == 0) break;
            }
        }
        if (best_count == 0) return false;
        for (int ei : incident[best_v]) {
            if (!edge_free(ei)) continue;
            const Edge& e = H.edge(static_cast<size_t>(ei));
            for (int v : e) used_vertex[v] = 1;
            picked.push_back(ei);
            if (solve(uncovered - static_cast<int>(e.size()))) return true;
            picked.pop_back();
            for (int v : e) used_vertex[v] = 0;
            if (exhausted) return false;
        }
        return false;
    }
};

}  // namespace

SolveResult perfect_matching(const UniformHypergraph& H, uint64_t node_budget) {
    if (H.n() % H.arity() != 0)
        throw std::invalid_argument("vertex count not divisible by arity");
    CoverSearch search(H, node_budget);
    SolveResult out;
    if (search.solve(H.n())) {
        Factor f;
        for (int ei : search.picked) f.blocks.push_back(H.edge(static_cast<size_t>(ei)));
        std::sort(f.blocks.begin(), f.blocks.end());
        out.status = SolveStatus::Found;
        out.factor = std::move(f);
    } else {
        out.status = search.exhausted ? SolveStatus::BudgetExceeded : SolveStatus::None;
    }
    out.nodes = search.nodes;
    return out;
}

SolveResult clique_factor(const UniformHypergraph& G, int r, uint64_t node_budget) {
    if (G.n() % r != 0) throw std::invalid_argument("vertex count not divisible by r");
    return perfect_matching(cliques(G, r), node_budget);
}

}  // namespace cliquelab
