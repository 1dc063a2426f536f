#include "cliquelab/time_coupling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cliquelab/combinatorics.hpp"
#include "cliquelab/detectors.hpp"
#include "cliquelab/factor.hpp"
#include "cliquelab/rng.hpp"

namespace cliquelab {

namespace {

std::string edge_str(const Edge& e) {
    std::ostringstream out;
    out << '{';
    for (size_t i = 0; i < e.size(); ++i) {
        if (i) out << ',';
        out << e[i];
    }
    out << '}';
    return out.str();
}

uint64_t pack(const Edge& e) {
    uint64_t key = 0;
    for (int v : e) key = (key << 9) | static_cast<uint64_t>(v);
    return key;
}

// base-arity subsets of h in lexicographic order
std::vector<Edge> base_edges_of(const Edge& h, int s) {
    std::vector<Edge> out;
    auto idx = first_k_subset(s);
    do {
        Edge e;
        e.reserve(s);
        for (int i : idx) e.push_back(h[i - 1]);
        out.push_back(std::move(e));
    } while (next_k_subset(idx, static_cast<int>(h.size())));
    return out;
}

}  // namespace

TimeOrders build_time_orders(const UniformHypergraph& G, const UniformHypergraph& H, uint64_t seed,
                             const TimeOrderOptions& opts) {
    if (G.n() != H.n()) throw std::invalid_argument("vertex sets differ");
    if (H.arity() <= G.arity()) throw std::invalid_argument("need H arity above G arity");
    int s = G.arity();

    TimeOrders t;
    t.n = G.n();
    t.r = H.arity();
    t.s = s;
    t.g_edges = G.edges();
    t.h_edges = H.edges();

    std::map<uint64_t, size_t> g_index;
    for (size_t i = 0; i < t.g_edges.size(); ++i) g_index[pack(t.g_edges[i])] = i;

    // containment check + clique edge lists
    std::vector<std::vector<size_t>> clique_edges(t.h_edges.size());
    for (size_t hi = 0; hi < t.h_edges.size(); ++hi) {
        for (const auto& e : base_edges_of(t.h_edges[hi], s)) {
            auto it = g_index.find(pack(e));
            if (it == g_index.end())
                throw std::invalid_argument("H not contained in cl(G): hyperedge " +
                                            edge_str(t.h_edges[hi]) + " misses edge " + edge_str(e));
            clique_edges[hi].push_back(it->second);
        }
    }

    if (opts.strict_preconditions) {
        const auto& masks = H.masks();
        std::vector<int> partner_count(t.h_edges.size(), 0);
        std::vector<std::pair<size_t, size_t>> pairs;
        for (size_t i = 0; i < t.h_edges.size(); ++i)
            for (size_t j = i + 1; j < t.h_edges.size(); ++j) {
                int ov = masks[i].and_count(masks[j]);
                if (ov >= s + 1)
                    throw std::invalid_argument("overlap of " + std::to_string(ov) +
                                                " vertices between " + edge_str(t.h_edges[i]) +
                                                " and " + edge_str(t.h_edges[j]));
                if (ov == 2 && s == 2) {
                    ++partner_count[i];
                    ++partner_count[j];
                    pairs.emplace_back(i, j);
                }
            }
        for (size_t i = 0; i < partner_count.size(); ++i)
            if (partner_count[i] > 1)
                throw std::invalid_argument("hyperedge " + edge_str(t.h_edges[i]) +
                                            " has more than one partner");
        for (size_t a = 0; a < pairs.size(); ++a)
            for (size_t b = a + 1; b < pairs.size(); ++b) {
                VertexMask ma, mb;
                for (int v : t.h_edges[pairs[a].first]) ma.set(v);
                for (int v : t.h_edges[pairs[a].second]) ma.set(v);
                for (int v : t.h_edges[pairs[b].first]) mb.set(v);
                for (int v : t.h_edges[pairs[b].second]) mb.set(v);
                if (ma.and_count(mb) > 0)
                    throw std::invalid_argument("partner pairs share a vertex");
            }
    }

    // For every base edge shared by two or more hyperedges, the smallest
    // hyperedge keeps it; every other sharer excludes it behind a dummy.
    // Blocks over the xi marks stay pairwise disjoint, so sigma_H is uniform.
    std::map<size_t, std::vector<size_t>> sharers;  // g edge index -> hyperedges
    for (size_t hi = 0; hi < t.h_edges.size(); ++hi)
        for (size_t ge : clique_edges[hi]) sharers[ge].push_back(hi);

    Rng rng(seed);
    t.tau_edge.resize(t.g_edges.size());
    for (auto& x : t.tau_edge) x = rng.next_unit();

    std::vector<std::vector<size_t>> excluded(t.h_edges.size());  // g edge ids
    for (auto& [ge, hs] : sharers) {
        if (hs.size() < 2) continue;
        for (size_t k = 1; k < hs.size(); ++k) {
            PartnerRecord rec;
            rec.keeper = hs[0];
            rec.excluder = hs[k];
            rec.shared_edge = t.g_edges[ge];
            rec.xi_prime = rng.next_unit();
            excluded[hs[k]].push_back(ge);
            t.partner_pairs.push_back(std::move(rec));
        }
    }

    t.tau_hyperedge.resize(t.h_edges.size());
    t.tau_clique.resize(t.h_edges.size());
    t.in_s2.assign(t.h_edges.size(), 0);
    std::vector<double> dummy_max(t.h_edges.size(), 0.0);
    for (const auto& rec : t.partner_pairs)
        dummy_max[rec.excluder] = std::max(dummy_max[rec.excluder], rec.xi_prime);
    for (size_t hi = 0; hi < t.h_edges.size(); ++hi) {
        double tc = 0.0, th = 0.0;
        const auto& excl = excluded[hi];
        for (size_t ge : clique_edges[hi]) {
            tc = std::max(tc, t.tau_edge[ge]);
            if (std::find(excl.begin(), excl.end(), ge) == excl.end())
                th = std::max(th, t.tau_edge[ge]);
        }
        if (!excl.empty()) {
            t.in_s2[hi] = 1;
            th = std::max(th, dummy_max[hi]);
        }
        t.tau_clique[hi] = tc;
        t.tau_hyperedge[hi] = th;
    }

    auto argsort = [](const std::vector<double>& vals) {
        std::vector<size_t> idx(vals.size());
        std::iota(idx.begin(), idx.end(), size_t{0});
        std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
            if (vals[a] != vals[b]) return vals[a] < vals[b];
            return a < b;
        });
        return idx;
    };
    t.sigma_g = argsort(t.tau_edge);
    t.sigma_h = argsort(t.tau_hyperedge);
    return t;
}

HittingComparison hitting_comparison(const TimeOrders& orders) {
    HittingComparison out;
    std::vector<Edge> g_order;
    g_order.reserve(orders.g_edges.size());
    for (size_t i : orders.sigma_g) g_order.push_back(orders.g_edges[i]);
    size_t tg_idx = covering_prefix_clique(orders.n, orders.s, orders.r, g_order);
    if (tg_idx != SIZE_MAX) out.t_g = orders.tau_edge[orders.sigma_g[tg_idx - 1]];

    std::vector<Edge> h_order;
    h_order.reserve(orders.h_edges.size());
    for (size_t i : orders.sigma_h) h_order.push_back(orders.h_edges[i]);
    size_t th_idx = covering_prefix_min_degree(orders.n, h_order);
    if (th_idx != SIZE_MAX) out.t_h = orders.tau_hyperedge[orders.sigma_h[th_idx - 1]];

    out.equal = out.t_g && out.t_h && *out.t_g == *out.t_h;
    return out;
}

ExceptionalSet exceptional_set(const TimeOrders& orders) {
    auto hit = hitting_comparison(orders);
    if (!hit.t_g || !hit.t_h)
        throw std::logic_error("hitting times undefined; no exceptional set");
    ExceptionalSet out;
    double tg = *hit.t_g, th = *hit.t_h;
    for (size_t hi = 0; hi < orders.h_edges.size(); ++hi) {
        if (orders.tau_hyperedge[hi] > th) continue;   // not in H(t_H)
        if (orders.tau_clique[hi] <= tg) continue;     // clique present in G(t_G)
        out.members.push_back(orders.h_edges[hi]);
        if (!orders.in_s2[hi]) out.subset_s2 = false;
        // an excluded edge above t_H forces its keeper out of H(t_H)
        bool witness = false;
        for (const auto& rec : orders.partner_pairs) {
            if (rec.excluder != hi) continue;
            if (orders.tau_hyperedge[rec.keeper] > th) {
                witness = true;
                break;
            }
        }
        if (!witness) out.keepers_outside = false;
    }
    return out;
}

RandomSetBundle build_random_set(const ProcessTrace& trace, int r, double g_value, double c_i,
                                 double c_r, uint64_t seed) {
    if (trace.arity != r) throw std::invalid_argument("trace arity mismatch");
    int n = trace.n;
    if (c_i < 0) {
        c_i = 10.0;
        for (int i = 2; i <= r; ++i) c_i *= i;  // 10 * r!
    }
    if (c_r < 0) c_r = 10.0 * std::pow(r, 4);
    RandomSetBundle out;
    out.pi_i = c_i * g_value / std::pow(static_cast<double>(n), r - 1);
    out.pi_r = c_r * g_value / static_cast<double>(n);
    if (out.pi_i < 0 || out.pi_i > 1)
        throw std::invalid_argument("pi_I = " + std::to_string(out.pi_i) +
                                    " outside [0,1]; scale c_I");
    if (out.pi_r < 0 || out.pi_r > 1)
        throw std::invalid_argument("pi_R = " + std::to_string(out.pi_r) +
                                    " outside [0,1]; scale c_R");

    out.t_h = hitting_time_min_degree(trace);
    std::set<Edge> prefix(trace.order.begin(), trace.order.begin() + static_cast<long>(out.t_h));
    out.h_at_th.assign(prefix.begin(), prefix.end());
    std::vector<VertexMask> prefix_masks;
    prefix_masks.reserve(out.h_at_th.size());
    for (const auto& h : out.h_at_th) prefix_masks.push_back(VertexMask::of(h));

    // exclusive potential partners per prefix hyperedge
    out.x_h.assign(out.h_at_th.size(), 0);
    std::map<uint64_t, size_t> prefix_index;
    for (size_t i = 0; i < out.h_at_th.size(); ++i) prefix_index[pack(out.h_at_th[i])] = i;
    std::vector<int64_t> exclusive_of(trace.order.size(), -1);  // position -> prefix idx
    for (size_t pos = out.t_h; pos < trace.order.size(); ++pos) {
        auto mask = VertexMask::of(trace.order[pos]);
        int64_t partner = -1;
        int count = 0;
        for (size_t i = 0; i < out.h_at_th.size(); ++i)
            if (mask.and_count(prefix_masks[i]) == 2) {
                ++count;
                partner = static_cast<int64_t>(i);
                if (count > 1) break;
            }
        if (count == 1) {
            exclusive_of[pos] = partner;
            ++out.x_h[static_cast<size_t>(partner)];
        }
    }

    Rng rng(seed);
    // I: iid over the potential hyperedges not yet present
    std::vector<char> in_i(trace.order.size(), 0);
    for (size_t pos = out.t_h; pos < trace.order.size(); ++pos)
        if (rng.bernoulli(out.pi_i)) {
            in_i[pos] = 1;
            out.i_set.push_back(trace.order[pos]);
        }

    std::vector<char> in_r(out.h_at_th.size(), 0);
    for (size_t pos = out.t_h; pos < trace.order.size(); ++pos)
        if (in_i[pos] && exclusive_of[pos] >= 0) in_r[static_cast<size_t>(exclusive_of[pos])] = 1;
    out.pi_h.resize(out.h_at_th.size());
    for (size_t i = 0; i < out.h_at_th.size(); ++i) {
        out.pi_h[i] = 1.0 - std::pow(1.0 - out.pi_i, out.x_h[i]);
        if (out.pi_h[i] > out.pi_r)
            throw std::invalid_argument("pi_h = " + std::to_string(out.pi_h[i]) +
                                        " exceeds pi_R; scale c_I down or c_R up");
        if (in_r[i]) out.r_prime.push_back(out.h_at_th[i]);
    }
    // boost R' to R
    for (size_t i = 0; i < out.h_at_th.size(); ++i) {
        if (!in_r[i]) {
            double boost = (out.pi_r - out.pi_h[i]) / (1.0 - out.pi_h[i]);
            if (rng.bernoulli(boost)) in_r[i] = 1;
        }
        if (in_r[i]) out.r_set.push_back(out.h_at_th[i]);
    }

    // extended order: prefix, then I in uniform order, then the rest
    out.extended_order.assign(trace.order.begin(), trace.order.begin() + static_cast<long>(out.t_h));
    std::vector<Edge> rest;
    for (size_t pos = out.t_h; pos < trace.order.size(); ++pos)
        if (!in_i[pos]) rest.push_back(trace.order[pos]);
    std::vector<Edge> i_shuffled = out.i_set;
    rng.shuffle(i_shuffled);
    rng.shuffle(rest);
    out.extended_order.insert(out.extended_order.end(), i_shuffled.begin(), i_shuffled.end());
    out.extended_order.insert(out.extended_order.end(), rest.begin(), rest.end());

    // F: prefix hyperedges gaining a partner within the next floor(g n) arrivals
    size_t window = static_cast<size_t>(std::floor(g_value * n));
    size_t window_end = std::min(out.extended_order.size(), out.t_h + window);
    for (size_t i = 0; i < out.h_at_th.size(); ++i) {
        bool hit = false;
        for (size_t pos = out.t_h; pos < window_end && !hit; ++pos)
            if (VertexMask::of(out.extended_order[pos]).and_count(prefix_masks[i]) == 2) hit = true;
        if (hit) out.f_set.push_back(out.h_at_th[i]);
    }
    return out;
}

ThinResult thin_process(const ProcessTrace& trace, double pi_r, uint64_t seed) {
    if (pi_r < 0 || pi_r >= 1) throw std::invalid_argument("need pi_R in [0,1)");
    ThinResult out;
    out.removed.assign(trace.order.size(), 0);
    Rng rng(seed);
    for (auto& x : out.removed) x = rng.bernoulli(pi_r) ? 1 : 0;
    size_t t_h = hitting_time_min_degree(trace);
    out.thinned_order.reserve(trace.order.size());
    size_t survivors_in_prefix = 0;
    std::vector<char> covered(trace.n + 1, 0);
    int remaining = trace.n;
    for (size_t pos = 0; pos < trace.order.size(); ++pos) {
        if (out.removed[pos]) continue;
        out.thinned_order.push_back(trace.order[pos]);
        if (pos < t_h) {
            ++survivors_in_prefix;
            for (int v : trace.order[pos])
                if (!covered[v]) {
                    covered[v] = 1;
                    --remaining;
                }
        }
    }
    out.t0 = survivors_in_prefix;
    out.min_degree_ok = (remaining == 0);
    return out;
}

std::string ChainVerdict::csv_header() {
    return "seed,n,r,s,stage,coupling_failed,containment,matching,factor,t_eq,e_size,"
           "e_subset_s2,e_partner_window,f_in_r,thin_ok,approx_steps,runtime_ms";
}

namespace {

std::string stage_name(ChainStage st) {
    switch (st) {
        case ChainStage::Ok: return "ok";
        case ChainStage::CouplingFailed: return "coupling_failed";
        case ChainStage::Degenerate: return "degenerate";
        case ChainStage::Uncovered: return "uncovered";
    }
    return "?";
}

}  // namespace

std::string ChainVerdict::csv_row() const {
    std::ostringstream out;
    out << seed << ',' << n << ',' << r << ',' << s << ',' << stage_name(stage) << ','
        << coupling_failed << ',' << containment << ',' << matching << ',' << factor << ','
        << t_eq << ',' << e_size << ',' << e_subset_s2 << ',' << e_partner_window << ','
        << f_in_r << ',' << thin_ok << ',' << approx_steps << ',' << runtime_ms;
    return out.str();
}

ChainVerdict chain_coupling_general(int n, int r, int s, uint64_t seed, const ChainOptions& opts) {
    if (n % r != 0) throw std::invalid_argument("n must be divisible by r");
    auto start = std::chrono::steady_clock::now();
    auto finish = [&](ChainVerdict& v) {
        v.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                                 start)
                           .count();
        return v;
    };
    ChainVerdict v;
    v.seed = seed;
    v.n = n;
    v.r = r;
    v.s = s;

    auto wp = window_params(n, r, s, opts.delta);
    double g = wp.g_value;

    // stage 1: the static coupling
    CoupleOptions copts = opts.couple;
    copts.delta = opts.delta;
    CoupledOutcome couple =
        opts.static_mode == StaticMode::Monotone
            ? monotone_couple(n, r, s, wp.p_plus, Rng::stream(seed, 10).next_u64(), opts.delta)
        : (s == 2 && r == 3 && opts.r3_cycle_step)
            ? modified_couple_r3(n, wp.p_plus, seed, copts)
            : couple_plain(n, r, s, wp.p_plus, Rng::stream(seed, 10).next_u64(), copts);
    v.coupling_failed = couple.failed;
    v.approx_steps = couple.approx_steps;
    if (couple.failed) {
        v.stage = ChainStage::CouplingFailed;
        return finish(v);
    }

    // stage 2: auxiliary-time orders (throws only if containment is broken)
    TimeOrders orders;
    try {
        orders = build_time_orders(couple.G, couple.H, Rng::stream(seed, 11).next_u64());
    } catch (const std::invalid_argument&) {
        v.stage = ChainStage::Degenerate;
        return finish(v);
    }

    auto hit = hitting_comparison(orders);
    if (!hit.t_g || !hit.t_h) {
        v.stage = ChainStage::Uncovered;
        return finish(v);
    }
    v.t_eq = hit.equal;
    double tg = *hit.t_g, th = *hit.t_h;

    auto exc = exceptional_set(orders);
    v.e_size = static_cast<int>(exc.members.size());
    v.e_subset_s2 = exc.subset_s2;

    // realized H-process: H(t_H) prefix, then the rest of H by sigma_H, then
    // the complement in uniform order
    Rng glue_rng = Rng::stream(seed, 12);
    std::vector<Edge> full_order;
    size_t t_h_idx = 0;
    for (size_t i : orders.sigma_h) {
        full_order.push_back(orders.h_edges[i]);
        if (orders.tau_hyperedge[i] <= th) ++t_h_idx;
    }
    {
        std::set<Edge> have(full_order.begin(), full_order.end());
        std::vector<Edge> complement;
        for (auto& e : all_k_subsets(n, r))
            if (!have.count(e)) complement.push_back(std::move(e));
        glue_rng.shuffle(complement);
        full_order.insert(full_order.end(), complement.begin(), complement.end());
    }
    size_t window = static_cast<size_t>(std::floor(g * n));

    // partner-window flag for the exceptional members
    {
        size_t window_end = std::min(full_order.size(), t_h_idx + window);
        bool all_found = true;
        for (const auto& member : exc.members) {
            auto mm = VertexMask::of(member);
            bool found = false;
            for (size_t pos = t_h_idx; pos < window_end && !found; ++pos)
                if (VertexMask::of(full_order[pos]).and_count(mm) == 2) found = true;
            all_found = all_found && found;
        }
        v.e_partner_window = all_found;
    }

    // stage 3: exclusive-partner random set on the glued process
    double pi_i = opts.pi_i_override;
    if (pi_i < 0) {
        double c_i = 10.0;
        for (int i = 2; i <= r; ++i) c_i *= i;
        pi_i = c_i * g / std::pow(static_cast<double>(n), r - 1);
    }
    double pi_r = opts.pi_r_override;
    if (pi_r < 0) pi_r = 10.0 * std::pow(r, 4) * g / static_cast<double>(n);
    if (pi_i > 1 || pi_r > 1)
        throw std::invalid_argument("pi_I/pi_R exceed 1 at this n; pass overrides");

    std::vector<Edge> prefix_sorted(full_order.begin(),
                                    full_order.begin() + static_cast<long>(t_h_idx));
    std::sort(prefix_sorted.begin(), prefix_sorted.end());
    std::vector<VertexMask> prefix_masks;
    for (const auto& h : prefix_sorted) prefix_masks.push_back(VertexMask::of(h));
    // exclusive partner counts
    std::vector<int> x_h(prefix_sorted.size(), 0);
    std::vector<int64_t> exclusive_of(full_order.size(), -1);
    for (size_t pos = t_h_idx; pos < full_order.size(); ++pos) {
        auto mask = VertexMask::of(full_order[pos]);
        int count = 0;
        int64_t partner = -1;
        for (size_t i = 0; i < prefix_sorted.size(); ++i)
            if (mask.and_count(prefix_masks[i]) == 2) {
                ++count;
                partner = static_cast<int64_t>(i);
                if (count > 1) break;
            }
        if (count == 1) {
            exclusive_of[pos] = partner;
            ++x_h[static_cast<size_t>(partner)];
        }
    }
    // I = first k arrivals after T_H, k ~ Bin(M - T_H, pi_I); conditional on
    // the realized order this is the same law as sampling I independently
    // and inserting it first.
    size_t k_i = 0;
    for (size_t pos = t_h_idx; pos < full_order.size(); ++pos)
        if (glue_rng.bernoulli(pi_i)) ++k_i;
    std::vector<char> in_r(prefix_sorted.size(), 0);
    for (size_t pos = t_h_idx; pos < std::min(full_order.size(), t_h_idx + k_i); ++pos)
        if (exclusive_of[pos] >= 0) in_r[static_cast<size_t>(exclusive_of[pos])] = 1;
    bool coherent = true;
    for (size_t i = 0; i < prefix_sorted.size(); ++i) {
        double pi_h = 1.0 - std::pow(1.0 - pi_i, x_h[i]);
        if (pi_h > pi_r) {
            coherent = false;
            break;
        }
    }
    if (coherent) {
        for (size_t i = 0; i < prefix_sorted.size(); ++i) {
            if (in_r[i]) continue;
            double pi_h = 1.0 - std::pow(1.0 - pi_i, x_h[i]);
            if (glue_rng.bernoulli((pi_r - pi_h) / (1.0 - pi_h))) in_r[i] = 1;
        }
    } else {
        // fall back to the plain binomial set; recorded via f_in_r staying honest
        for (size_t i = 0; i < prefix_sorted.size(); ++i)
            in_r[i] = glue_rng.bernoulli(pi_r) ? 1 : 0;
    }
    // F subset-of R?
    {
        size_t window_end = std::min(full_order.size(), t_h_idx + window);
        bool ok = true;
        for (size_t i = 0; i < prefix_sorted.size() && ok; ++i) {
            bool in_f = false;
            for (size_t pos = t_h_idx; pos < window_end && !in_f; ++pos)
                if (VertexMask::of(full_order[pos]).and_count(prefix_masks[i]) == 2) in_f = true;
            if (in_f && !in_r[i]) ok = false;
        }
        v.f_in_r = ok;
    }

    // stage 4: thinning (prefix removals = R, later removals fresh coins)
    std::map<uint64_t, size_t> prefix_index;
    for (size_t i = 0; i < prefix_sorted.size(); ++i) prefix_index[pack(prefix_sorted[i])] = i;
    std::vector<Edge> thinned;
    size_t survivors_in_prefix = 0;
    for (size_t pos = 0; pos < full_order.size(); ++pos) {
        bool removed;
        if (pos < t_h_idx) {
            removed = in_r[prefix_index[pack(full_order[pos])]] != 0;
        } else {
            removed = glue_rng.bernoulli(pi_r);
        }
        if (removed) continue;
        thinned.push_back(full_order[pos]);
        if (pos < t_h_idx) ++survivors_in_prefix;
    }
    size_t t0 = survivors_in_prefix;
    size_t t_prime = covering_prefix_min_degree(n, thinned);
    v.thin_ok = (t_prime == t0);

    // final verdicts
    if (t_prime == SIZE_MAX) {
        v.stage = ChainStage::Uncovered;
        return finish(v);
    }
    std::vector<Edge> h_prime(thinned.begin(), thinned.begin() + static_cast<long>(t_prime));
    UniformHypergraph Hp(n, r, h_prime);

    std::vector<Edge> g_at_tg;
    for (size_t i = 0; i < orders.g_edges.size(); ++i)
        if (orders.tau_edge[i] <= tg) g_at_tg.push_back(orders.g_edges[i]);
    UniformHypergraph Gtg(n, s, std::move(g_at_tg));

    std::map<uint64_t, size_t> h_index;
    for (size_t i = 0; i < orders.h_edges.size(); ++i) h_index[pack(orders.h_edges[i])] = i;
    bool contained = true;
    for (const auto& h : Hp.edges()) {
        auto it = h_index.find(pack(h));
        if (it != h_index.end()) {
            if (orders.tau_clique[it->second] > tg) {
                contained = false;
                break;
            }
        } else {
            // a post-snapshot arrival: test its base edges directly
            bool all = true;
            for (const auto& e : base_edges_of(h, s))
                if (!Gtg.contains(e)) {
                    all = false;
                    break;
                }
            if (!all) {
                contained = false;
                break;
            }
        }
    }
    v.containment = contained;
    v.matching = perfect_matching(Hp, opts.solver_budget).found();
    v.factor = clique_factor(Gtg, r, opts.solver_budget).found();
    return finish(v);
}

ChainVerdict chain_coupling(int n, int r, uint64_t seed, const ChainOptions& opts) {
    return chain_coupling_general(n, r, 2, seed, opts);
}

}  // namespace cliquelab
