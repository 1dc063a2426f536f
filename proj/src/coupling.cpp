#include "cliquelab/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"

#include "cliquelab/combinatorics.hpp"
#include "cliquelab/condprob.hpp"
#include "cliquelab/rng.hpp"

namespace cliquelab {

namespace {

// Particle pool over the full edge-indicator vector, kept consistent with a
// ClauseSystem by filtering, systematic resampling and Gibbs sweeps. Used
// whenever the clause component around a target is too large for the exact
// engine; estimates from it are flagged `approx` in the step history.
class ParticleEnsemble {
  public:
    ParticleEnsemble(int particles, size_t n_vars, double p)
        : k_(particles), n_vars_(n_vars), p_(p) {}

    bool initialized() const { return !assign_.empty(); }

    void init(const ClauseSystem& sys, int burn_sweeps, Rng& rng) {
        assign_.assign(static_cast<size_t>(k_), std::vector<uint8_t>(n_vars_));
        for (auto& a : assign_)
            for (auto& x : a) x = rng.bernoulli(p_) ? 1 : 0;
        snapshot(sys);
        apply_fixed();
        repair(rng);
        for (int s = 0; s < burn_sweeps; ++s) sweep(rng);
    }

    // Every particle must satisfy the clause set exactly (downstream reveals
    // force edges of yes-cliques, and a violated clause would wedge the
    // system). Turn off one free variable of each fully-on clause until a
    // fixpoint; each step lowers the on-count, so this terminates.
    void repair(Rng& rng) {
        for (auto& a : assign_) {
            bool dirty = true;
            while (dirty) {
                dirty = false;
                for (const auto& c : clauses_) {
                    bool all_on = true;
                    for (VarId v : c)
                        if (!a[v]) {
                            all_on = false;
                            break;
                        }
                    if (all_on) {
                        a[c[rng.below(c.size())]] = 0;
                        dirty = true;
                    }
                }
            }
        }
    }

    double estimate_all_present(const std::vector<VarId>& vars) const {
        int hit = 0;
        for (const auto& a : assign_) {
            bool on = true;
            for (VarId v : vars)
                if (!a[v]) {
                    on = false;
                    break;
                }
            hit += on;
        }
        return static_cast<double>(hit) / static_cast<double>(k_);
    }

    // Condition on "all of `vars` present" == answer, then refresh against
    // the (already updated) system.
    void observe(const ClauseSystem& sys, const std::vector<VarId>& vars, bool answer,
                 int step_sweeps, Rng& rng) {
        std::vector<size_t> survivors;
        for (size_t i = 0; i < assign_.size(); ++i) {
            bool on = true;
            for (VarId v : vars)
                if (!assign_[i][v]) {
                    on = false;
                    break;
                }
            if (on == answer) survivors.push_back(i);
        }
        snapshot(sys);
        if (survivors.empty()) {
            // degenerate pool: rebuild from scratch under the new system
            for (auto& a : assign_)
                for (auto& x : a) x = rng.bernoulli(p_) ? 1 : 0;
            apply_fixed();
            repair(rng);
            for (int s = 0; s < 8 * std::max(step_sweeps, 1); ++s) sweep(rng);
            return;
        }
        // systematic resampling
        std::vector<std::vector<uint8_t>> next;
        next.reserve(assign_.size());
        double step = static_cast<double>(survivors.size()) / static_cast<double>(k_);
        double u = rng.next_unit() * step;
        for (int i = 0; i < k_; ++i) {
            size_t pick = survivors[std::min(
                survivors.size() - 1, static_cast<size_t>(u + static_cast<double>(i) * step))];
            next.push_back(assign_[pick]);
        }
        assign_ = std::move(next);
        apply_fixed();
        for (int s = 0; s < step_sweeps; ++s) sweep(rng);
    }

    void refresh(const ClauseSystem& sys, int sweeps, Rng& rng) {
        snapshot(sys);
        apply_fixed();
        for (int s = 0; s < sweeps; ++s) sweep(rng);
    }

  private:
    void snapshot(const ClauseSystem& sys) {
        clauses_ = sys.active_clauses();
        var_clauses_.assign(n_vars_, {});
        for (size_t ci = 0; ci < clauses_.size(); ++ci)
            for (VarId v : clauses_[ci]) var_clauses_[v].push_back(ci);
        fixed_.clear();
        for (VarId v : sys.touched_vars()) {
            auto st = sys.state(v);
            if (st != ClauseSystem::VarState::Free)
                fixed_.emplace_back(v, st == ClauseSystem::VarState::Present);
        }
        free_vars_.clear();
        for (size_t ci = 0; ci < clauses_.size(); ++ci)
            free_vars_.insert(free_vars_.end(), clauses_[ci].begin(), clauses_[ci].end());
        std::sort(free_vars_.begin(), free_vars_.end());
        free_vars_.erase(std::unique(free_vars_.begin(), free_vars_.end()), free_vars_.end());
    }

    void apply_fixed() {
        for (auto& a : assign_)
            for (auto [v, present] : fixed_) a[v] = present ? 1 : 0;
    }

    // Gibbs over the clause-touched free variables: a variable may be
    // present unless that completes some clause, so its conditional is
    // Bernoulli(p) or forced absent.
    void sweep(Rng& rng) {
        for (VarId v : free_vars_) {
            for (auto& a : assign_) {
                bool blocked = false;
                for (size_t ci : var_clauses_[v]) {
                    bool others_on = true;
                    for (VarId u : clauses_[ci])
                        if (u != v && !a[u]) {
                            others_on = false;
                            break;
                        }
                    if (others_on) {
                        blocked = true;
                        break;
                    }
                }
                a[v] = (!blocked && rng.bernoulli(p_)) ? 1 : 0;
            }
        }
    }

    int k_;
    size_t n_vars_;
    double p_;
    std::vector<std::vector<uint8_t>> assign_;
    std::vector<std::vector<VarId>> clauses_;
    std::vector<std::vector<size_t>> var_clauses_;
    std::vector<std::pair<VarId, bool>> fixed_;
    std::vector<VarId> free_vars_;
};

double pi_from(double p, int n, int r, int s, double delta) {
    return (1.0 - std::pow(static_cast<double>(n), -delta)) * std::pow(p, binom(r, s));
}

// P(all of `tvars` present | system) treating the clauses that meet the
// target as independent of one another: p^|T| times, per such clause,
// (1 - p^|C\T|) / (1 - p^|C|). Exact when no clause meets the target or a
// clause collapses into it; a deterministic local estimate otherwise. Used
// where the pattern systems of the r=3 algorithm make the component exact
// engine unusable.
struct LocalEstimate {
    double value = 0;
    bool exact = false;
};

LocalEstimate local_product_estimate(const ClauseSystem& sys, const std::vector<VarId>& tvars,
                                     double p) {
    std::vector<VarId> t_free;
    for (VarId v : tvars) {
        auto st = sys.state(v);
        if (st == ClauseSystem::VarState::Absent) return {0.0, true};
        if (st == ClauseSystem::VarState::Free) t_free.push_back(v);
    }
    std::sort(t_free.begin(), t_free.end());
    t_free.erase(std::unique(t_free.begin(), t_free.end()), t_free.end());
    if (t_free.empty()) return {1.0, true};
    double value = std::pow(p, static_cast<double>(t_free.size()));
    bool touched = false;
    std::unordered_set<size_t> seen;
    for (VarId v : t_free) {
        const auto* ids = sys.clause_ids_of(v);
        if (!ids) continue;
        for (size_t ci : *ids) {
            if (!sys.clause_active(ci) || !seen.insert(ci).second) continue;
            const auto& c = sys.clause(ci);
            size_t outside = 0;
            for (VarId u : c)
                if (!std::binary_search(t_free.begin(), t_free.end(), u)) ++outside;
            if (outside == 0) return {0.0, true};  // clause inside the target
            touched = true;
            value *= (1.0 - std::pow(p, static_cast<double>(outside))) /
                     (1.0 - std::pow(p, static_cast<double>(c.size())));
        }
    }
    return {value, !touched};
}

}  // namespace

std::string CoupledOutcome::to_json() const {
    nlohmann::json j;
    j["n"] = H.n();
    j["r"] = r;
    j["s"] = s;
    j["p"] = p;
    j["pi"] = pi;
    j["seed"] = seed;
    j["failed"] = failed;
    j["failure_reason"] = failure_reason == FailureReason::None              ? "none"
                          : failure_reason == FailureReason::PiBelowPiAtHeads ? "pi_below_pi_at_heads"
                                                                              : "cycle_mismatch";
    j["approx_steps"] = approx_steps;
    j["H"] = H.edges();
    j["G"] = G.edges();
    nlohmann::json hist = nlohmann::json::array();
    for (const auto& st : history) {
        hist.push_back({{"j", st.index},
                        {"answer", st.answer == 1 ? "yes" : st.answer == 0 ? "no" : "star"},
                        {"included", st.included},
                        {"pi_j", st.pi_j},
                        {"pi_j_prime", st.pi_j_prime},
                        {"approx", st.approx}});
    }
    j["history"] = std::move(hist);
    return j.dump();
}

CoupledOutcome couple_plain(int n, int r, int s, double p, uint64_t seed,
                            const CoupleOptions& opts) {
    if (!(r > s && s >= 2)) throw std::invalid_argument("need r > s >= 2");
    if (!(p > 0 && p < 1)) throw std::invalid_argument("need p in (0,1)");
    double pi = pi_from(p, n, r, s, opts.delta);

    EdgeIndexer ix(n, s);
    auto targets = all_k_subsets(n, r);

    Rng g_stream = Rng::stream(seed, 0);
    Rng coin_stream = Rng::stream(seed, 1);
    Rng particle_stream = Rng::stream(seed, 2);

    // the graph is realized up front; the loop reveals information about it
    std::vector<uint8_t> g_real(ix.count());
    for (auto& x : g_real) x = g_stream.bernoulli(p) ? 1 : 0;

    ClauseSystem sys;
    ParticleEnsemble ensemble(opts.particles, ix.count(), p);
    double clamp_lo = 1.0 / (2.0 * opts.particles);

    CoupledOutcome out{UniformHypergraph::empty(n, r), UniformHypergraph::empty(n, s)};
    out.p = p;
    out.pi = pi;
    out.seed = seed;
    out.r = r;
    out.s = s;
    std::vector<Edge> h_edges;

    for (size_t j = 0; j < targets.size(); ++j) {
        auto tvars = ix.expansion(targets[j]);
        bool approx = false;
        double pij;
        if (auto exact = sys.conditional_all_present(tvars, p, opts.caps)) {
            pij = *exact;
        } else {
            if (!ensemble.initialized()) ensemble.init(sys, opts.burn_sweeps, particle_stream);
            pij = std::clamp(ensemble.estimate_all_present(tvars), clamp_lo, 1.0 - clamp_lo);
            approx = true;
            ++out.approx_steps;
        }
        CoupleStep step;
        step.index = static_cast<uint32_t>(j);
        step.pi_j = pij;
        step.pi_j_prime = pi;
        step.approx = approx;
        if (pij >= pi) {
            if (coin_stream.bernoulli(pi / pij)) {
                bool holds = true;
                for (VarId v : tvars)
                    if (!g_real[v]) {
                        holds = false;
                        break;
                    }
                step.answer = holds ? 1 : 0;
                step.included = holds;
                if (holds) {
                    for (VarId v : tvars) sys.force_present(v);
                } else {
                    sys.add_clause(tvars);
                }
                if (ensemble.initialized())
                    ensemble.observe(sys, tvars, holds, opts.step_sweeps, particle_stream);
            } else {
                step.answer = -1;
            }
        } else {
            // the algorithm's failure branch: include by a plain pi-coin
            step.answer = -1;
            step.included = coin_stream.bernoulli(pi);
            if (step.included) {
                out.failed = true;
                out.failure_reason = FailureReason::PiBelowPiAtHeads;
            }
        }
        if (step.included) h_edges.push_back(targets[j]);
        if (opts.keep_history) out.history.push_back(step);
    }

    std::vector<Edge> g_edges;
    for (size_t v = 0; v < g_real.size(); ++v)
        if (g_real[v]) g_edges.push_back(ix.edge(static_cast<VarId>(v)));
    out.H = UniformHypergraph(n, r, std::move(h_edges));
    out.G = UniformHypergraph(n, s, std::move(g_edges));
    return out;
}

CoupledOutcome riordan_couple(int n, int r, double p, uint64_t seed, const CoupleOptions& opts) {
    if (r < 4) throw std::invalid_argument("the plain coupling algorithm requires r >= 4");
    return couple_plain(n, r, 2, p, seed, opts);
}

CoupledOutcome monotone_couple(int n, int r, int s, double p, uint64_t seed, double delta) {
    if (!(r > s && s >= 2)) throw std::invalid_argument("need r > s >= 2");
    if (!(p > 0 && p < 1)) throw std::invalid_argument("need p in (0,1)");
    EdgeIndexer ix(n, s);
    Rng rng = Rng::stream(seed, 0);
    std::vector<double> marks(ix.count());
    for (auto& u : marks) u = rng.next_unit();
    double shrink = 1.0 - std::pow(static_cast<double>(n), -delta);
    double q = p * std::pow(shrink, 1.0 / binom(r, s));

    std::vector<Edge> g_edges;
    for (size_t v = 0; v < marks.size(); ++v)
        if (marks[v] <= p) g_edges.push_back(ix.edge(static_cast<VarId>(v)));
    std::vector<Edge> h_edges;
    for (const auto& target : all_k_subsets(n, r)) {
        double worst = 0;
        auto idx = first_k_subset(s);
        Edge sub(s);
        do {
            for (int i = 0; i < s; ++i) sub[i] = target[idx[i] - 1];
            worst = std::max(worst, marks[ix.id(sub)]);
        } while (next_k_subset(idx, r));
        if (worst <= q) h_edges.push_back(target);
    }
    CoupledOutcome out{UniformHypergraph(n, r, std::move(h_edges)),
                       UniformHypergraph(n, s, std::move(g_edges))};
    out.p = p;
    out.pi = shrink * std::pow(p, binom(r, s));
    out.seed = seed;
    out.r = r;
    out.s = s;
    return out;
}

namespace {

// All potential clean 3-cycles on [n]: a middle triple {m1,m2,m3} plus an
// injective assignment of outer vertices to its pairs.
struct PotentialCycle {
    std::array<Edge, 3> hyperedges;      // sorted triple of sorted 3-sets
    std::array<VarId, 3> h_vars;         // hyperedge indicator ids
    std::array<VarId, 9> g_vars;         // the nine distinct graph-edge ids
    Edge middle;
};

std::vector<PotentialCycle> potential_clean_cycles(int n, const EdgeIndexer& hx,
                                                   const EdgeIndexer& gx) {
    std::vector<PotentialCycle> out;
    auto middles = all_k_subsets(n, 3);
    for (const auto& m : middles) {
        std::vector<int> others;
        for (int v = 1; v <= n; ++v)
            if (v != m[0] && v != m[1] && v != m[2]) others.push_back(v);
        const std::array<std::pair<int, int>, 3> pairs = {
            std::make_pair(m[0], m[1]), std::make_pair(m[0], m[2]), std::make_pair(m[1], m[2])};
        for (int a : others)
            for (int b : others) {
                if (b == a) continue;
                for (int c : others) {
                    if (c == a || c == b) continue;
                    PotentialCycle pc;
                    pc.middle = m;
                    std::array<int, 3> outer = {a, b, c};
                    for (int i = 0; i < 3; ++i) {
                        Edge h = {pairs[i].first, pairs[i].second, outer[i]};
                        std::sort(h.begin(), h.end());
                        pc.hyperedges[i] = std::move(h);
                    }
                    std::sort(pc.hyperedges.begin(), pc.hyperedges.end());
                    int gi = 0;
                    for (const auto& h : pc.hyperedges) {
                        const std::array<std::pair<int, int>, 3> he = {
                            std::make_pair(h[0], h[1]), std::make_pair(h[0], h[2]),
                            std::make_pair(h[1], h[2])};
                        for (auto [x, y] : he) pc.g_vars[gi++] = gx.id({x, y});
                    }
                    // the nine clique edges of a clean 3-cycle are distinct
                    std::sort(pc.g_vars.begin(), pc.g_vars.end());
                    for (int i = 0; i < 3; ++i) pc.h_vars[i] = hx.id(pc.hyperedges[i]);
                    out.push_back(std::move(pc));
                }
            }
    }
    return out;
}

}  // namespace

CoupledOutcome modified_couple_r3(int n, double p, uint64_t seed, const CoupleOptions& opts) {
    if (!(p > 0 && p < 1)) throw std::invalid_argument("need p in (0,1)");
    const int r = 3;
    double pi = pi_from(p, n, r, 2, opts.delta);

    EdgeIndexer gx(n, 2);
    EdgeIndexer hx(n, 3);
    auto cycles = potential_clean_cycles(n, hx, gx);
    double n_cycles = static_cast<double>(cycles.size());

    Rng cycle_stream = Rng::stream(seed, 4);
    Rng g_stream = Rng::stream(seed, 0);
    Rng coin_stream = Rng::stream(seed, 1);

    // Truncated collection laws (none / exactly one clean 3-cycle) with
    // first-moment Poisson masses; the per-cycle mass is symmetric.
    double lambda_h = n_cycles * pi * pi * pi;
    double lambda_g = n_cycles * std::pow(p, 9);
    double qh0 = 1.0 / (1.0 + lambda_h), qh1 = lambda_h / (1.0 + lambda_h);
    double qg0 = 1.0 / (1.0 + lambda_g), qg1 = lambda_g / (1.0 + lambda_g);

    // maximal coupling over {empty} + single cycles
    double agree0 = std::min(qg0, qh0);
    double agree1 = std::min(qg1, qh1);  // total over all singles
    double agreement = agree0 + agree1;
    int64_t cyc_g = -1, cyc_h = -1;  // -1 = empty collection
    double u = cycle_stream.next_unit();
    if (u < agreement) {
        if (u < agree0) {
            cyc_g = cyc_h = -1;
        } else {
            cyc_g = cyc_h = static_cast<int64_t>(cycle_stream.below(cycles.size()));
        }
    } else {
        auto residual_pick = [&](double q0, double a0, double q1, double a1) -> int64_t {
            double m0 = q0 - a0, m1 = q1 - a1;
            double z = m0 + m1;
            if (z <= 0) return -1;
            if (cycle_stream.next_unit() * z < m0) return -1;
            return static_cast<int64_t>(cycle_stream.below(cycles.size()));
        };
        cyc_g = residual_pick(qg0, agree0, qg1, agree1);
        cyc_h = residual_pick(qh0, agree0, qh1, agree1);
    }

    CoupledOutcome out{UniformHypergraph::empty(n, r), UniformHypergraph::empty(n, 2)};
    out.p = p;
    out.pi = pi;
    out.seed = seed;
    out.r = r;
    out.s = 2;
    out.cycle_step_ran = true;
    if (cyc_g != cyc_h) {
        out.failed = true;
        out.failure_reason = FailureReason::CycleMismatch;
    }
    auto record_cycle = [&](int64_t idx, std::vector<CleanThreeCycle>& dst) {
        if (idx < 0) return;
        const auto& pc = cycles[static_cast<size_t>(idx)];
        CleanThreeCycle c;
        c.edges = pc.hyperedges;
        c.middle = pc.middle;
        dst.push_back(std::move(c));
    };
    record_cycle(cyc_g, out.cycles_g);
    record_cycle(cyc_h, out.cycles_h);

    // G-side system: chosen cycle forced, every other potential cycle's
    // edge set excluded. H-side system over hyperedge indicators likewise.
    // The freshly built pattern clauses all have the same width, so the
    // absorption scan is skipped until reductions start.
    ClauseSystem sys_g, sys_h;
    for (size_t ci = 0; ci < cycles.size(); ++ci) {
        if (static_cast<int64_t>(ci) == cyc_g) {
            for (VarId v : cycles[ci].g_vars) sys_g.force_present(v);
        } else {
            sys_g.add_clause({cycles[ci].g_vars.begin(), cycles[ci].g_vars.end()}, false);
        }
        if (static_cast<int64_t>(ci) == cyc_h) {
            for (VarId v : cycles[ci].h_vars) sys_h.force_present(v);
        } else {
            sys_h.add_clause({cycles[ci].h_vars.begin(), cycles[ci].h_vars.end()}, false);
        }
    }

    // realize G once, Gibbs-conditioned on the cycle constraints
    ParticleEnsemble g_world(1, gx.count(), p);
    g_world.init(sys_g, 8 * opts.burn_sweeps, g_stream);
    std::vector<uint8_t> g_real(gx.count());
    for (size_t v = 0; v < gx.count(); ++v)
        g_real[v] = g_world.estimate_all_present({static_cast<VarId>(v)}) > 0.5 ? 1 : 0;

    std::set<Edge> cycle_h_edges;
    if (cyc_h >= 0)
        for (const auto& h : cycles[static_cast<size_t>(cyc_h)].hyperedges) cycle_h_edges.insert(h);

    std::vector<Edge> h_edges(cycle_h_edges.begin(), cycle_h_edges.end());
    auto targets = all_k_subsets(n, 3);

    uint32_t step_index = 0;
    for (const auto& target : targets) {
        if (cycle_h_edges.count(target)) continue;  // decided in the cycle step
        auto tvars = gx.expansion(target);
        VarId hvar = hx.id(target);

        CoupleStep step;
        step.index = step_index++;

        auto est_g = local_product_estimate(sys_g, tvars, p);
        auto est_h = local_product_estimate(sys_h, {hvar}, pi);
        double pij = est_g.value;
        double pij_prime = est_h.value;  // < pi whenever any clause meets B_j
        step.pi_j = pij;
        step.pi_j_prime = pij_prime;
        step.approx = !(est_g.exact && est_h.exact);
        if (step.approx) ++out.approx_steps;

        bool b_present = false;
        if (pij >= pij_prime) {
            if (pij == 0.0 && pij_prime == 0.0) {
                step.answer = 0;
                sys_g.add_clause(tvars);
            } else if (coin_stream.bernoulli(pij_prime / pij)) {
                bool holds = true;
                for (VarId v : tvars)
                    if (!g_real[v]) {
                        holds = false;
                        break;
                    }
                step.answer = holds ? 1 : 0;
                b_present = holds;
                if (holds) {
                    for (VarId v : tvars) sys_g.force_present(v);
                } else {
                    sys_g.add_clause(tvars);
                }
            } else {
                step.answer = -1;
            }
        } else {
            step.answer = -1;
            b_present = coin_stream.bernoulli(pij_prime);
            if (b_present) {
                out.failed = true;
                if (out.failure_reason == FailureReason::None)
                    out.failure_reason = FailureReason::PiBelowPiAtHeads;
            }
        }
        step.included = b_present;
        if (b_present) {
            sys_h.force_present(hvar);
            h_edges.push_back(target);
        } else {
            sys_h.force_absent(hvar);
        }
        if (opts.keep_history) out.history.push_back(step);
    }

    std::vector<Edge> g_edges;
    for (size_t v = 0; v < g_real.size(); ++v)
        if (g_real[v]) g_edges.push_back(gx.edge(static_cast<VarId>(v)));
    out.H = UniformHypergraph(n, 3, std::move(h_edges));
    out.G = UniformHypergraph(n, 2, std::move(g_edges));
    return out;
}

double pi_star(const UniformHypergraph& H0, const Edge& target, double p, int base_arity) {
    if (H0.contains(target)) throw std::invalid_argument("target must not be an edge of H0");
    auto tmask = VertexMask::of(target);
    int missing = 0;
    auto idx = first_k_subset(base_arity);
    Edge sub(base_arity);
    do {
        for (int i = 0; i < base_arity; ++i) sub[i] = target[idx[i] - 1];
        bool covered = false;
        for (const auto& m : H0.masks()) {
            bool inside = true;
            for (int v : sub)
                if (!m.test(v)) {
                    inside = false;
                    break;
                }
            if (inside) {
                covered = true;
                break;
            }
        }
        (void)tmask;
        if (!covered) ++missing;
    } while (next_k_subset(idx, static_cast<int>(target.size())));
    return std::pow(p, missing);
}

double extra_clique_sum(const UniformHypergraph& H0, int v, double p) {
    int r = H0.arity();
    int n = H0.n();
    double base = std::pow(p, binom(r, 2));
    // candidates: r-sets containing v that meet some H0-edge in >= 2 vertices
    std::set<Edge> candidates;
    std::vector<int> rest;
    for (const auto& h0 : H0.edges()) {
        auto pair_idx = first_k_subset(2);
        do {
            std::set<int> core = {v, h0[pair_idx[0] - 1], h0[pair_idx[1] - 1]};
            int need = r - static_cast<int>(core.size());
            if (need < 0) continue;
            rest.clear();
            for (int u = 1; u <= n; ++u)
                if (!core.count(u)) rest.push_back(u);
            if (need == 0) {
                Edge e(core.begin(), core.end());
                candidates.insert(std::move(e));
            } else {
                auto idx = first_k_subset(need);
                do {
                    Edge e(core.begin(), core.end());
                    for (int i = 0; i < need; ++i) e.push_back(rest[idx[i] - 1]);
                    std::sort(e.begin(), e.end());
                    candidates.insert(std::move(e));
                } while (next_k_subset(idx, static_cast<int>(rest.size())));
            }
        } while (next_k_subset(pair_idx, r));
    }
    double sum = 0;
    for (const auto& h : candidates) {
        if (H0.contains(h)) continue;
        sum += pi_star(H0, h, p) - base;
    }
    return sum;
}

std::vector<std::pair<Edge, ExtraCliqueClass>> classify_extra_cliques(const UniformHypergraph& G,
                                                                      const UniformHypergraph& H) {
    if (G.n() != H.n()) throw std::invalid_argument("vertex sets differ");
    auto cl = cliques(G, H.arity());
    std::set<Edge> middles;
    if (H.arity() == 3)
        for (const auto& c : clean_three_cycles(H)) middles.insert(c.middle);
    bool avoidable = find_avoidable_configuration(H).has_value();
    std::vector<std::pair<Edge, ExtraCliqueClass>> out;
    for (const auto& t : cl.edges()) {
        if (H.contains(t)) continue;
        ExtraCliqueClass cls = ExtraCliqueClass::Unexplained;
        if (middles.count(t))
            cls = ExtraCliqueClass::MiddleTriangle;
        else if (avoidable)
            cls = ExtraCliqueClass::AvoidableConfig;
        out.emplace_back(t, cls);
    }
    return out;
}

}  // namespace cliquelab
