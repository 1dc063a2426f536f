#include "cliquelab/condprob.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cliquelab/combinatorics.hpp"
#include "cliquelab/rng.hpp"

namespace cliquelab {

namespace {

uint64_t pack(const Edge& e) {
    uint64_t key = 0;
    for (int v : e) key = (key << 9) | static_cast<uint64_t>(v);
    return key;
}

}  // namespace

EdgeIndexer::EdgeIndexer(int n, int k) : n_(n), k_(k), list_(all_k_subsets(n, k)) {
    index_.reserve(list_.size() * 2);
    for (size_t i = 0; i < list_.size(); ++i) index_[pack(list_[i])] = static_cast<VarId>(i);
}

VarId EdgeIndexer::id(const Edge& e) const {
    auto it = index_.find(pack(e));
    if (it == index_.end()) throw std::invalid_argument("edge not over [n] with the right arity");
    return it->second;
}

std::vector<VarId> EdgeIndexer::expansion(const Edge& vertices) const {
    std::vector<VarId> out;
    auto idx = first_k_subset(k_);
    Edge scratch(k_);
    do {
        for (int i = 0; i < k_; ++i) scratch[i] = vertices[idx[i] - 1];
        std::sort(scratch.begin(), scratch.end());
        out.push_back(id(scratch));
    } while (next_k_subset(idx, static_cast<int>(vertices.size())));
    return out;
}

namespace {

void validate(const CliqueConditioning& cond) {
    if (cond.p < 0 || cond.p > 1) throw std::invalid_argument("p must lie in [0,1]");
    if (cond.r <= cond.base_arity) throw std::invalid_argument("need r > base arity");
    for (const auto& pos : cond.positives)
        for (const auto& neg : cond.negatives)
            if (pos == neg) throw std::invalid_argument("positives and negatives intersect");
}

// Forced edges and clauses from the conditioning. Throws if the event has
// probability zero.
ClauseSystem build_system(const CliqueConditioning& cond, const EdgeIndexer& ix) {
    ClauseSystem sys;
    for (const auto& t : cond.positives)
        for (VarId v : ix.expansion(t)) sys.force_present(v);
    for (const auto& e : cond.forced_edges) sys.force_present(ix.id(e));
    for (const auto& t : cond.negatives) sys.add_clause(ix.expansion(t));
    for (const auto& fam : cond.forbidden_patterns) {
        std::vector<VarId> vars;
        vars.reserve(fam.size());
        for (const auto& e : fam) vars.push_back(ix.id(e));
        sys.add_clause(std::move(vars));
    }
    if (sys.contradictory())
        throw std::invalid_argument("conditioning event has probability zero");
    return sys;
}

}  // namespace

ExactCond exact_conditional_prob(const CliqueConditioning& cond, const Edge& target,
                                 const ClauseCaps& caps) {
    validate(cond);
    EdgeIndexer ix(cond.n, cond.base_arity);
    ClauseSystem sys = build_system(cond, ix);
    auto tvars = ix.expansion(target);
    ExactCond out;
    out.free_vars = static_cast<int>(sys.component_vars(tvars).size());
    auto value = sys.conditional_all_present(tvars, cond.p, caps);
    if (!value) {
        out.status = ExactCond::Status::TooLarge;
        return out;
    }
    out.value = *value;
    return out;
}

McCond mc_conditional_prob(const CliqueConditioning& cond, const Edge& target, uint64_t trials,
                           uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("need at least one trial");
    validate(cond);
    EdgeIndexer ix(cond.n, cond.base_arity);
    ClauseSystem sys = build_system(cond, ix);
    auto tvars = ix.expansion(target);

    // sample space: the free target vars plus their clause component
    std::vector<VarId> t_free;
    for (VarId v : tvars) {
        auto st = sys.state(v);
        if (st == ClauseSystem::VarState::Absent) return {McCond::Status::Ok, 0.0, 0.0, trials, trials};
        if (st == ClauseSystem::VarState::Free) t_free.push_back(v);
    }
    McCond out;
    out.trials = trials;
    if (t_free.empty()) {
        out.estimate = 1.0;
        out.accepted = trials;
        return out;
    }
    auto comp = sys.component_vars(t_free);
    auto clauses = sys.active_clauses();
    // keep only clauses inside the component
    std::vector<std::vector<int>> comp_clauses;
    auto bit = [&](VarId v) {
        auto it = std::lower_bound(comp.begin(), comp.end(), v);
        return it != comp.end() && *it == v ? static_cast<int>(it - comp.begin()) : -1;
    };
    for (const auto& c : clauses) {
        bool inside = true;
        std::vector<int> bits;
        for (VarId v : c) {
            int b = bit(v);
            if (b < 0) {
                inside = false;
                break;
            }
            bits.push_back(b);
        }
        if (inside) comp_clauses.push_back(std::move(bits));
    }
    std::vector<int> t_bits;
    for (VarId v : t_free) t_bits.push_back(bit(v));

    Rng rng(seed);
    std::vector<uint8_t> assign(comp.size());
    uint64_t accepted = 0, hits = 0;
    for (uint64_t t = 0; t < trials; ++t) {
        for (auto& a : assign) a = rng.bernoulli(cond.p) ? 1 : 0;
        bool ok = true;
        for (const auto& c : comp_clauses) {
            bool full = true;
            for (int b : c)
                if (!assign[b]) {
                    full = false;
                    break;
                }
            if (full) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        ++accepted;
        bool t_on = true;
        for (int b : t_bits)
            if (!assign[b]) {
                t_on = false;
                break;
            }
        if (t_on) ++hits;
    }
    out.accepted = accepted;
    if (accepted == 0) {
        out.status = McCond::Status::NoAcceptances;
        return out;
    }
    double est = static_cast<double>(hits) / static_cast<double>(accepted);
    out.estimate = est;
    out.half_width = 1.959964 * std::sqrt(std::max(est * (1.0 - est), 1e-12) /
                                          static_cast<double>(accepted));
    return out;
}

HarrisReport harris_check(int n_vars, const std::vector<double>& probs, const EventOracle& a,
                          const EventOracle& b, uint64_t trials, uint64_t seed) {
    if (static_cast<int>(probs.size()) != n_vars) throw std::invalid_argument("probs size mismatch");
    Rng rng(seed);
    std::vector<uint8_t> omega(n_vars);
    uint64_t ca = 0, cb = 0, cab = 0;
    for (uint64_t t = 0; t < trials; ++t) {
        for (int i = 0; i < n_vars; ++i) omega[i] = rng.bernoulli(probs[i]) ? 1 : 0;
        bool ea = a(omega), eb = b(omega);
        ca += ea;
        cb += eb;
        cab += (ea && eb);
    }
    auto freq = [&](uint64_t c) { return static_cast<double>(c) / static_cast<double>(trials); };
    auto hw = [&](double f) {
        return 1.959964 * std::sqrt(std::max(f * (1.0 - f), 1e-12) / static_cast<double>(trials));
    };
    HarrisReport rep;
    rep.trials = trials;
    rep.p_a = freq(ca);
    rep.p_b = freq(cb);
    rep.p_ab = freq(cab);
    rep.hw_a = hw(rep.p_a);
    rep.hw_b = hw(rep.p_b);
    rep.hw_ab = hw(rep.p_ab);
    rep.gap = rep.p_ab - rep.p_a * rep.p_b;
    rep.gap_hw = rep.hw_ab + rep.hw_a + rep.hw_b;
    return rep;
}

}  // namespace cliquelab
