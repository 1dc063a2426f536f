#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cliquelab/hypergraph.hpp"

namespace cliquelab {

// g(n) used throughout: max(1, ln ln n), evaluated at max(n, 3) so the inner
// log stays positive. Grows to infinity, is o(log n / log log n), and the
// clamp keeps it >= 1 at desk scale (active for n <= 15).
double g_default(int64_t n);

struct WindowParams {
    int64_t n = 0;
    int r = 0;
    int s = 2;
    double delta = 0.1;
    double g_value = 0;
    double pi_minus = 0, pi_plus = 0;
    double p_minus = 0, p_plus = 0;

    std::string to_report() const;
};

// pi_pm = (ln n +- g(n)) / C(n-1, r-1); p_pm = (pi_pm / (1 - n^-delta))^(1/C(r,s)).
WindowParams window_params(int64_t n, int r, int s, double delta);

// A uniformly ordered sequence of all C(n, arity) potential edges, realized
// from iid uniform marks (the standard coupling). The prefix at threshold pi
// is exactly {h : U_h <= pi}.
struct ProcessTrace {
    int n = 0;
    int arity = 0;
    uint64_t seed = 0;
    std::vector<Edge> order;       // ascending in u
    std::vector<double> u_sorted;  // parallel to order; empty for synthetic traces

    size_t prefix_count(double pi) const;
    UniformHypergraph prefix(size_t t) const;

    std::string to_json() const;
};

ProcessTrace standard_process(int n, int arity, uint64_t seed);

// Smallest t such that the first t edges cover every vertex.
size_t hitting_time_min_degree(const ProcessTrace& trace);

// Smallest t such that every vertex of the first-t-edges structure lies in
// some r-clique. Incremental: each arriving edge can only complete cliques
// containing it.
size_t hitting_time_clique_cover(const ProcessTrace& trace, int r);

// Serial reference: recompute cl(prefix) from scratch per step. Kept for
// tests and the benchmark target.
size_t hitting_time_clique_cover_rescan(const ProcessTrace& trace, int r);

// Order-based scans over an arbitrary edge sequence; return the 1-based
// completing position, or SIZE_MAX if the property never holds.
size_t covering_prefix_min_degree(int n, const std::vector<Edge>& order);
size_t covering_prefix_clique(int n, int s, int r, const std::vector<Edge>& order);

// Chernoff tail bounds for Bin(n, p): upper exp(-t^2/(2(np+t/3))) for
// 0 <= t <= n - np, lower exp(-t^2/(2np)) for 0 <= t <= np.
std::pair<double, double> chernoff_bounds(double n, double p, double t);

}  // namespace cliquelab
