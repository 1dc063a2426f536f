#include "cliquelab/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "cliquelab/combinatorics.hpp"

namespace cliquelab {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Pack a sorted vertex set into a 64-bit key (vertex ids fit in 9 bits each
// for n <= 256 and arity <= 7; larger arities fall back to a set lookup).
constexpr int kPackableArity = 7;

uint64_t pack_edge(const Edge& e) {
    uint64_t key = 0;
    for (int v : e) key = (key << 9) | static_cast<uint64_t>(v);
    return key;
}

}  // namespace

int64_t nullity_of_edges(const std::vector<Edge>& edges, int arity) {
    if (edges.empty()) return 0;
    std::vector<int> verts;
    for (const auto& e : edges) verts.insert(verts.end(), e.begin(), e.end());
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    auto idx = [&](int v) {
        return static_cast<int>(std::lower_bound(verts.begin(), verts.end(), v) - verts.begin());
    };
    UnionFind uf(static_cast<int>(verts.size()));
    for (const auto& e : edges)
        for (size_t i = 1; i < e.size(); ++i) uf.unite(idx(e[0]), idx(e[i]));
    std::set<int> roots;
    for (size_t i = 0; i < verts.size(); ++i) roots.insert(uf.find(static_cast<int>(i)));
    int64_t e = static_cast<int64_t>(edges.size());
    int64_t v = static_cast<int64_t>(verts.size());
    int64_t c = static_cast<int64_t>(roots.size());
    return (arity - 1) * e + c - v;
}

int64_t nullity(const UniformHypergraph& H) { return nullity_of_edges(H.edges(), H.arity()); }

namespace {

// Recursive connected-subset growth. `chosen` holds edge indices; `frontier`
// the adjacent not-yet-decided indices; indices below `root` are excluded so
// each connected subset is enumerated exactly once (from its minimum index).
struct AvoidableSearch {
    const UniformHypergraph& H;
    const std::vector<std::vector<int>>& adj;
    int max_edges;
    std::vector<int> chosen;
    std::vector<char> banned;
    std::optional<std::vector<Edge>> result;

    AvoidableSearch(const UniformHypergraph& h, const std::vector<std::vector<int>>& a, int cap)
        : H(h), adj(a), max_edges(cap), banned(h.size(), 0) {}

    bool nullity_now_ge2() {
        std::vector<Edge> sub;
        sub.reserve(chosen.size());
        for (int i : chosen) sub.push_back(H.edge(i));
        return nullity_of_edges(sub, H.arity()) >= 2;
    }

    // Extend `chosen` with subsets of the frontier, in include/exclude order.
    bool grow(int root, std::vector<int> frontier) {
        if (nullity_now_ge2()) {
            std::vector<Edge> sub;
            for (int i : chosen) sub.push_back(H.edge(i));
            std::sort(sub.begin(), sub.end());
            result = std::move(sub);
            return true;
        }
        if (static_cast<int>(chosen.size()) == max_edges) return false;
        while (!frontier.empty()) {
            int next = frontier.back();
            frontier.pop_back();
            if (banned[next]) continue;
            // include `next`
            chosen.push_back(next);
            std::vector<int> extended = frontier;
            for (int nb : adj[next])
                if (nb > root && !banned[nb] &&
                    std::find(chosen.begin(), chosen.end(), nb) == chosen.end() &&
                    std::find(extended.begin(), extended.end(), nb) == extended.end())
                    extended.push_back(nb);
            if (grow(root, std::move(extended))) return true;
            chosen.pop_back();
            // exclude `next` for the rest of this branch
            banned[next] = 1;
            if (grow(root, frontier)) {
                banned[next] = 0;
                return true;
            }
            banned[next] = 0;
            return false;
        }
        return false;
    }

    bool run(int root) {
        chosen.assign(1, root);
        std::vector<int> frontier;
        for (int nb : adj[root])
            if (nb > root) frontier.push_back(nb);
        return grow(root, std::move(frontier));
    }
};

}  // namespace

std::optional<std::vector<Edge>> find_avoidable_configuration(const UniformHypergraph& H,
                                                              int max_edges) {
    if (H.arity() < 3) throw std::invalid_argument("avoidable configurations need arity >= 3");
    if (max_edges < 0) max_edges = 1 << std::min(H.arity() + 1, 20);
    size_t m = H.size();
    if (m < 2) return std::nullopt;
    std::vector<std::vector<int>> adj(m);
    const auto& masks = H.masks();
    for (size_t i = 0; i < m; ++i)
        for (size_t j = i + 1; j < m; ++j)
            if (masks[i].and_count(masks[j]) >= 1) {
                adj[i].push_back(static_cast<int>(j));
                adj[j].push_back(static_cast<int>(i));
            }
    // Fast path: any pair overlapping in >= 3 vertices is already a witness.
    for (size_t i = 0; i < m; ++i)
        for (int j : adj[i])
            if (static_cast<size_t>(j) > i && masks[i].and_count(masks[j]) >= 3)
                return std::vector<Edge>{H.edge(i), H.edge(static_cast<size_t>(j))};
    AvoidableSearch search(H, adj, max_edges);
    for (size_t root = 0; root < m; ++root)
        if (search.run(static_cast<int>(root))) return search.result;
    return std::nullopt;
}

std::vector<std::pair<Edge, Edge>> partner_pairs(const UniformHypergraph& H) {
    if (H.arity() < 3) throw std::invalid_argument("partner pairs need arity >= 3");
    std::vector<std::pair<Edge, Edge>> out;
    const auto& masks = H.masks();
    for (size_t i = 0; i < H.size(); ++i)
        for (size_t j = i + 1; j < H.size(); ++j)
            if (masks[i].and_count(masks[j]) == 2) out.emplace_back(H.edge(i), H.edge(j));
    return out;
}

std::vector<CleanThreeCycle> clean_three_cycles(const UniformHypergraph& H) {
    if (H.arity() != 3) throw std::invalid_argument("clean 3-cycles are defined for arity 3");
    std::vector<CleanThreeCycle> out;
    const auto& masks = H.masks();
    size_t m = H.size();
    for (size_t a = 0; a < m; ++a) {
        for (size_t b = a + 1; b < m; ++b) {
            if (masks[a].and_count(masks[b]) != 1) continue;
            for (size_t c = b + 1; c < m; ++c) {
                if (masks[a].and_count(masks[c]) != 1) continue;
                if (masks[b].and_count(masks[c]) != 1) continue;
                int mab = intersection_size(H.edge(a), H.edge(b));
                (void)mab;
                // meeting vertices must be three distinct vertices
                auto meet = [&](size_t x, size_t y) {
                    for (int v : H.edge(x))
                        if (masks[y].test(v)) return v;
                    return 0;
                };
                int v1 = meet(a, b), v2 = meet(a, c), v3 = meet(b, c);
                if (v1 == v2 || v1 == v3 || v2 == v3) continue;
                CleanThreeCycle cyc;
                cyc.edges = {H.edge(a), H.edge(b), H.edge(c)};
                cyc.middle = {v1, v2, v3};
                std::sort(cyc.middle.begin(), cyc.middle.end());
                out.push_back(std::move(cyc));
            }
        }
    }
    return out;
}

namespace {

struct EdgeLookup {
    std::unordered_set<uint64_t> packed;
    const UniformHypergraph* H = nullptr;
    bool use_pack = false;

    explicit EdgeLookup(const UniformHypergraph& h) : H(&h) {
        use_pack = h.arity() <= kPackableArity;
        if (use_pack) {
            packed.reserve(h.size() * 2);
            for (const auto& e : h.edges()) packed.insert(pack_edge(e));
        }
    }

    bool contains(const Edge& e) const {
        if (use_pack) return packed.count(pack_edge(e)) != 0;
        return H->contains(e);
    }
};

void extend_clique(const UniformHypergraph& G, const EdgeLookup& lookup, int r, Edge& chosen,
                   int next_min, std::vector<Edge>& out, Edge& scratch) {
    int s = G.arity();
    if (static_cast<int>(chosen.size()) == r) {
        out.push_back(chosen);
        return;
    }
    for (int u = next_min; u <= G.n(); ++u) {
        // every s-subset of chosen+u containing u must be an edge
        bool ok = true;
        if (static_cast<int>(chosen.size()) >= s - 1) {
            auto idx = first_k_subset(s - 1);
            do {
                scratch.clear();
                for (int i : idx) scratch.push_back(chosen[i - 1]);
                scratch.push_back(u);
                if (!lookup.contains(scratch)) {
                    ok = false;
                    break;
                }
            } while (next_k_subset(idx, static_cast<int>(chosen.size())));
        }
        if (!ok) continue;
        chosen.push_back(u);
        extend_clique(G, lookup, r, chosen, u + 1, out, scratch);
        chosen.pop_back();
    }
}

}  // namespace

UniformHypergraph cliques(const UniformHypergraph& G, int r) {
    if (r <= G.arity()) throw std::invalid_argument("clique arity must exceed edge arity");
    EdgeLookup lookup(G);
    std::vector<Edge> out;
    Edge chosen, scratch;
    chosen.reserve(r);
    extend_clique(G, lookup, r, chosen, 1, out, scratch);
    return UniformHypergraph(G.n(), r, std::move(out));
}

UniformHypergraph clique_expansion(const UniformHypergraph& H, int s) {
    if (s >= H.arity()) throw std::invalid_argument("expansion arity must be below edge arity");
    std::vector<Edge> out;
    for (const auto& h : H.edges()) {
        auto idx = first_k_subset(s);
        do {
            Edge e;
            e.reserve(s);
            for (int i : idx) e.push_back(h[i - 1]);
            out.push_back(std::move(e));
        } while (next_k_subset(idx, H.arity()));
    }
    return UniformHypergraph(H.n(), s, std::move(out));
}

std::vector<int> low_degree_vertices(const UniformHypergraph& H, double g_value) {
    if (g_value <= 0) throw std::invalid_argument("g must be positive");
    auto deg = H.degrees();
    std::vector<int> out;
    for (int v = 1; v <= H.n(); ++v)
        if (static_cast<double>(deg[v]) <= 7.0 * g_value) out.push_back(v);
    return out;
}

BadEventFlags bad_events(const UniformHypergraph& H, double pi, double g_value) {
    if (pi < 0 || pi > 1) throw std::invalid_argument("pi must lie in [0,1]");
    BadEventFlags f;
    double n = H.n();
    double logn = std::log(n);
    double expected = binom(H.n() - 1, H.arity() - 1) * pi;
    double b1_threshold = expected + std::max(expected, 3.0 * logn);
    auto deg = H.degrees();
    for (int v = 1; v <= H.n(); ++v) {
        if (static_cast<double>(deg[v]) > b1_threshold && !f.b1) {
            f.b1 = true;
            f.b1_vertex = v;
        }
        if (deg[v] == 0 && !f.b5) {
            f.b5 = true;
            f.b5_vertex = v;
        }
    }
    if (auto witness = find_avoidable_configuration(H)) {
        f.b2 = true;
        f.b2_witness = *witness;
    }
    auto low = low_degree_vertices(H, g_value);
    if (static_cast<double>(low.size()) > std::pow(logn, 8.0 * g_value)) {
        f.b3 = true;
        f.b3_vertices = low;
    }
    auto pairs = partner_pairs(H);
    f.b4_pair_count = pairs.size();
    if (static_cast<double>(pairs.size()) > std::pow(logn, 3.0)) f.b4 = true;
    return f;
}

}  // namespace cliquelab
