#include "cliquelab/process.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"

#include "cliquelab/combinatorics.hpp"
#include "cliquelab/detectors.hpp"
#include "cliquelab/rng.hpp"

namespace cliquelab {

double g_default(int64_t n) {
    if (n < 2) throw std::invalid_argument("g_default needs n >= 2");
    double nn = static_cast<double>(std::max<int64_t>(n, 3));
    return std::max(1.0, std::log(std::log(nn)));
}

std::string WindowParams::to_report() const {
    std::ostringstream out;
    out << "n " << n << "\nr " << r << "\ns " << s << "\ndelta " << delta << "\ng " << g_value
        << "\npi_minus " << pi_minus << "\npi_plus " << pi_plus << "\np_minus " << p_minus
        << "\np_plus " << p_plus << "\n";
    return out.str();
}

WindowParams window_params(int64_t n, int r, int s, double delta) {
    if (!(n > r && r > s && s >= 2)) throw std::invalid_argument("need n > r > s >= 2");
    if (!(delta > 0 && delta < 1)) throw std::invalid_argument("delta must lie in (0,1)");
    WindowParams w;
    w.n = n;
    w.r = r;
    w.s = s;
    w.delta = delta;
    w.g_value = g_default(n);
    double logn = std::log(static_cast<double>(n));
    if (!(logn > w.g_value)) throw std::invalid_argument("need log n > g(n)");
    double denom = binom(n - 1, r - 1);
    w.pi_minus = (logn - w.g_value) / denom;
    w.pi_plus = (logn + w.g_value) / denom;
    double shrink = 1.0 - std::pow(static_cast<double>(n), -delta);
    double exponent = 1.0 / binom(r, s);
    w.p_minus = std::pow(w.pi_minus / shrink, exponent);
    w.p_plus = std::pow(w.pi_plus / shrink, exponent);
    if (w.pi_plus > 1.0 || w.p_plus > 1.0)
        throw std::invalid_argument("n too small for chosen r: window exceeds probability 1");
    return w;
}

size_t ProcessTrace::prefix_count(double pi) const {
    if (u_sorted.empty()) throw std::logic_error("trace has no uniform marks");
    return static_cast<size_t>(std::upper_bound(u_sorted.begin(), u_sorted.end(), pi) -
                               u_sorted.begin());
}

UniformHypergraph ProcessTrace::prefix(size_t t) const {
    t = std::min(t, order.size());
    std::vector<Edge> edges(order.begin(), order.begin() + static_cast<long>(t));
    return UniformHypergraph(n, arity, std::move(edges));
}

std::string ProcessTrace::to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["arity"] = arity;
    j["seed"] = seed;
    j["order"] = order;
    return j.dump();
}

ProcessTrace standard_process(int n, int arity, uint64_t seed) {
    if (n < arity) throw std::invalid_argument("need n >= arity");
    ProcessTrace t;
    t.n = n;
    t.arity = arity;
    t.seed = seed;
    auto subsets = all_k_subsets(n, arity);
    Rng rng(seed);
    std::vector<double> u(subsets.size());
    for (auto& x : u) x = rng.next_unit();
    std::vector<size_t> idx(subsets.size());
    std::iota(idx.begin(), idx.end(), size_t{0});
    // ties broken by canonical edge order
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
        if (u[a] != u[b]) return u[a] < u[b];
        return a < b;
    });
    t.order.reserve(subsets.size());
    t.u_sorted.reserve(subsets.size());
    for (size_t i : idx) {
        t.order.push_back(std::move(subsets[i]));
        t.u_sorted.push_back(u[i]);
    }
    return t;
}

size_t covering_prefix_min_degree(int n, const std::vector<Edge>& order) {
    std::vector<char> covered(n + 1, 0);
    int remaining = n;
    for (size_t t = 0; t < order.size(); ++t) {
        for (int v : order[t])
            if (!covered[v]) {
                covered[v] = 1;
                --remaining;
            }
        if (remaining == 0) return t + 1;
    }
    return SIZE_MAX;
}

size_t hitting_time_min_degree(const ProcessTrace& trace) {
    size_t t = covering_prefix_min_degree(trace.n, trace.order);
    return t == SIZE_MAX ? trace.order.size() : t;
}

namespace {

// Incremental clique-cover state over an edge stream of arity s. After each
// arriving edge, marks all vertices of every r-clique completed by it.
class CliqueCoverTracker {
  public:
    CliqueCoverTracker(int n, int s, int r) : n_(n), s_(s), r_(r), covered_(n + 1, 0) {
        if (s == 2) adj_.assign(n + 1, VertexMask{});
        remaining_ = n;
    }

    // returns true once every vertex is covered
    bool add_edge(const Edge& e) {
        present_.insert(key(e));
        if (s_ == 2) {
            adj_[e[0]].set(e[1]);
            adj_[e[1]].set(e[0]);
        }
        found_.clear();
        if (s_ == 2) {
            complete_graph_cliques(e);
        } else {
            Edge chosen = e;
            extend(chosen, 1);
        }
        for (const auto& c : found_)
            for (int v : c) mark(v);
        return remaining_ == 0;
    }

    bool done() const { return remaining_ == 0; }

  private:
    static uint64_t key(const Edge& e) {
        uint64_t k = 0;
        for (int v : e) k = (k << 9) | static_cast<uint64_t>(v);
        return k;
    }

    void mark(int v) {
        if (!covered_[v]) {
            covered_[v] = 1;
            --remaining_;
        }
    }

    bool has(Edge& scratch) const { return present_.count(key(scratch)) != 0; }

    // s == 2: cliques through edge (u,v) = (r-2)-cliques in N(u) & N(v)
    void complete_graph_cliques(const Edge& e) {
        VertexMask common;
        for (size_t w = 0; w < common.w.size(); ++w)
            common.w[w] = adj_[e[0]].w[w] & adj_[e[1]].w[w];
        Edge chosen = e;
        extend_graph(chosen, common);
    }

    void extend_graph(Edge& chosen, const VertexMask& cand) {
        if (static_cast<int>(chosen.size()) == r_) {
            found_.push_back(chosen);
            return;
        }
        for (int v = 1; v <= n_; ++v) {
            if (!cand.test(v)) continue;
            bool fresh = true;
            for (int u : chosen)
                if (u == v) fresh = false;
            if (!fresh) continue;
            VertexMask next;
            for (size_t w = 0; w < next.w.size(); ++w) next.w[w] = cand.w[w] & adj_[v].w[w];
            chosen.push_back(v);
            extend_graph(chosen, next);
            chosen.pop_back();
        }
    }

    // general s: grow r-supersets of the arrived edge, requiring every
    // s-subset that includes the newest vertex to be present
    void extend(Edge& chosen, int next_min) {
        if (static_cast<int>(chosen.size()) == r_) {
            Edge sorted = chosen;
            std::sort(sorted.begin(), sorted.end());
            found_.push_back(std::move(sorted));
            return;
        }
        for (int u = next_min; u <= n_; ++u) {
            if (std::find(chosen.begin(), chosen.end(), u) != chosen.end()) continue;
            Edge sorted = chosen;
            sorted.push_back(u);
            std::sort(sorted.begin(), sorted.end());
            // test every s-subset of `sorted` containing u
            bool ok = true;
            Edge scratch;
            auto comb = first_k_subset(s_);
            do {
                scratch.clear();
                bool contains_u = false;
                for (int i : comb) {
                    scratch.push_back(sorted[i - 1]);
                    if (sorted[i - 1] == u) contains_u = true;
                }
                if (contains_u && !has(scratch)) {
                    ok = false;
                    break;
                }
            } while (next_k_subset(comb, static_cast<int>(sorted.size())));
            if (!ok) continue;
            chosen.push_back(u);
            extend(chosen, u + 1);
            chosen.pop_back();
        }
    }

    int n_, s_, r_;
    std::vector<char> covered_;
    int remaining_ = 0;
    std::vector<VertexMask> adj_;
    std::unordered_set<uint64_t> present_;
    std::vector<Edge> found_;
};

}  // namespace

size_t covering_prefix_clique(int n, int s, int r, const std::vector<Edge>& order) {
    if (r <= s) throw std::invalid_argument("need r > edge arity");
    CliqueCoverTracker tracker(n, s, r);
    for (size_t t = 0; t < order.size(); ++t)
        if (tracker.add_edge(order[t])) return t + 1;
    return SIZE_MAX;
}

size_t hitting_time_clique_cover(const ProcessTrace& trace, int r) {
    size_t t = covering_prefix_clique(trace.n, trace.arity, r, trace.order);
    return t == SIZE_MAX ? trace.order.size() : t;
}

size_t hitting_time_clique_cover_rescan(const ProcessTrace& trace, int r) {
    if (r <= trace.arity) throw std::invalid_argument("need r > trace arity");
    for (size_t t = 1; t <= trace.order.size(); ++t) {
        auto cl = cliques(trace.prefix(t), r);
        std::vector<char> covered(trace.n + 1, 0);
        for (const auto& c : cl.edges())
            for (int v : c) covered[v] = 1;
        bool all = true;
        for (int v = 1; v <= trace.n; ++v)
            if (!covered[v]) {
                all = false;
                break;
            }
        if (all) return t;
    }
    return trace.order.size();
}

std::pair<double, double> chernoff_bounds(double n, double p, double t) {
    if (n < 0 || p < 0 || p > 1) throw std::invalid_argument("bad binomial parameters");
    double mean = n * p;
    if (t < 0 || t > std::min(mean, n - mean) + 1e-12)
        throw std::invalid_argument("t out of range for the tail bounds");
    if (t == 0) return {1.0, 1.0};
    double upper = std::exp(-t * t / (2.0 * (mean + t / 3.0)));
    double lower = std::exp(-t * t / (2.0 * mean));
    return {upper, lower};
}

}  // namespace cliquelab
