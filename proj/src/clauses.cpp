#include "cliquelab/clauses.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_set>

namespace cliquelab {

ClauseSystem::VarState ClauseSystem::state(VarId v) const {
    auto it = states_.find(v);
    return it == states_.end() ? VarState::Free : it->second;
}

void ClauseSystem::force_present(VarId v) {
    if (contradictory_) return;
    auto st = state(v);
    if (st == VarState::Present) return;
    if (st == VarState::Absent) {
        contradictory_ = true;
        return;
    }
    states_[v] = VarState::Present;
    auto it = var_clauses_.find(v);
    if (it != var_clauses_.end()) {
        auto ids = it->second;  // copy: removal mutates the index
        for (size_t ci : ids)
            if (active_[ci]) remove_var_from_clause(ci, v);
    }
    process_queue();
}

void ClauseSystem::force_absent(VarId v) {
    if (contradictory_) return;
    auto st = state(v);
    if (st == VarState::Absent) return;
    if (st == VarState::Present) {
        contradictory_ = true;
        return;
    }
    states_[v] = VarState::Absent;
    auto it = var_clauses_.find(v);
    if (it != var_clauses_.end()) {
        auto ids = it->second;
        for (size_t ci : ids)
            if (active_[ci]) satisfy_clause(ci);
    }
    process_queue();
}

void ClauseSystem::satisfy_clause(size_t ci) {
    active_[ci] = 0;
    for (VarId v : clauses_[ci]) {
        auto& list = var_clauses_[v];
        list.erase(std::remove(list.begin(), list.end(), ci), list.end());
    }
    clauses_[ci].clear();
}

void ClauseSystem::remove_var_from_clause(size_t ci, VarId v) {
    auto& c = clauses_[ci];
    c.erase(std::remove(c.begin(), c.end(), v), c.end());
    auto& list = var_clauses_[v];
    list.erase(std::remove(list.begin(), list.end(), ci), list.end());
    if (c.empty()) {
        contradictory_ = true;
        active_[ci] = 0;
    } else if (c.size() == 1) {
        absent_queue_.push_back(c[0]);
    }
}

void ClauseSystem::process_queue() {
    if (in_propagation_) return;
    in_propagation_ = true;
    while (!absent_queue_.empty() && !contradictory_) {
        VarId v = absent_queue_.back();
        absent_queue_.pop_back();
        auto st = state(v);
        if (st == VarState::Absent) continue;
        if (st == VarState::Present) {
            contradictory_ = true;
            break;
        }
        states_[v] = VarState::Absent;
        auto it = var_clauses_.find(v);
        if (it != var_clauses_.end()) {
            auto ids = it->second;
            for (size_t ci : ids)
                if (active_[ci]) satisfy_clause(ci);
        }
    }
    in_propagation_ = false;
}

void ClauseSystem::add_clause(std::vector<VarId> vars, bool check_absorption) {
    if (contradictory_) return;
    std::vector<VarId> reduced;
    reduced.reserve(vars.size());
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    for (VarId v : vars) {
        auto st = state(v);
        if (st == VarState::Absent) return;  // already satisfied
        if (st == VarState::Present) continue;
        reduced.push_back(v);
    }
    if (reduced.empty()) {
        contradictory_ = true;
        return;
    }
    if (reduced.size() == 1) {
        force_absent(reduced[0]);
        return;
    }
    // absorption: an existing clause that is a subset makes this one
    // redundant; existing supersets are made redundant by this one
    std::unordered_set<size_t> candidates;
    if (!check_absorption) {
        size_t id = clauses_.size();
        for (VarId v : reduced) var_clauses_[v].push_back(id);
        clauses_.push_back(std::move(reduced));
        active_.push_back(1);
        return;
    }
    for (VarId v : reduced) {
        auto it = var_clauses_.find(v);
        if (it == var_clauses_.end()) continue;
        for (size_t ci : it->second) candidates.insert(ci);
    }
    for (size_t ci : candidates) {
        if (!active_[ci]) continue;
        const auto& c = clauses_[ci];
        if (c.size() <= reduced.size() && std::includes(reduced.begin(), reduced.end(), c.begin(), c.end()))
            return;  // implied
    }
    for (size_t ci : candidates) {
        if (!active_[ci]) continue;
        const auto& c = clauses_[ci];
        if (c.size() > reduced.size() && std::includes(c.begin(), c.end(), reduced.begin(), reduced.end()))
            satisfy_clause(ci);  // absorbed
    }
    size_t id = clauses_.size();
    for (VarId v : reduced) var_clauses_[v].push_back(id);
    clauses_.push_back(std::move(reduced));
    active_.push_back(1);
}

std::vector<std::vector<VarId>> ClauseSystem::active_clauses() const {
    std::vector<std::vector<VarId>> out;
    for (size_t i = 0; i < clauses_.size(); ++i)
        if (active_[i]) out.push_back(clauses_[i]);
    return out;
}

size_t ClauseSystem::active_clause_count() const {
    size_t c = 0;
    for (char a : active_)
        if (a) ++c;
    return c;
}

const std::vector<size_t>* ClauseSystem::clause_ids_of(VarId v) const {
    auto it = var_clauses_.find(v);
    return it == var_clauses_.end() ? nullptr : &it->second;
}

std::vector<VarId> ClauseSystem::touched_vars() const {
    std::vector<VarId> out;
    out.reserve(states_.size());
    for (const auto& [v, st] : states_) out.push_back(v);
    for (size_t i = 0; i < clauses_.size(); ++i)
        if (active_[i]) out.insert(out.end(), clauses_[i].begin(), clauses_[i].end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

struct Component {
    std::vector<VarId> vars;         // free vars of reachable clauses + free targets
    std::vector<size_t> clause_ids;  // into ClauseSystem::clauses_
};

}  // namespace

std::vector<VarId> ClauseSystem::component_vars(const std::vector<VarId>& target) const {
    std::vector<VarId> frontier;
    std::unordered_set<VarId> seen;
    std::unordered_set<size_t> seen_clause;
    for (VarId v : target)
        if (state(v) == VarState::Free && seen.insert(v).second) frontier.push_back(v);
    std::vector<VarId> out(frontier);
    while (!frontier.empty()) {
        VarId v = frontier.back();
        frontier.pop_back();
        auto it = var_clauses_.find(v);
        if (it == var_clauses_.end()) continue;
        for (size_t ci : it->second) {
            if (!active_[ci] || !seen_clause.insert(ci).second) continue;
            for (VarId u : clauses_[ci])
                if (seen.insert(u).second) {
                    frontier.push_back(u);
                    out.push_back(u);
                }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<double> ClauseSystem::conditional_all_present(const std::vector<VarId>& target,
                                                            double p,
                                                            const ClauseCaps& caps) const {
    std::vector<VarId> t_free;
    for (VarId v : target) {
        auto st = state(v);
        if (st == VarState::Absent) return 0.0;
        if (st == VarState::Free) t_free.push_back(v);
    }
    std::sort(t_free.begin(), t_free.end());
    t_free.erase(std::unique(t_free.begin(), t_free.end()), t_free.end());
    if (t_free.empty()) return 1.0;

    // a clause entirely inside the target forces probability zero
    for (VarId v : t_free) {
        auto it = var_clauses_.find(v);
        if (it == var_clauses_.end()) continue;
        for (size_t ci : it->second) {
            if (!active_[ci]) continue;
            const auto& c = clauses_[ci];
            if (std::includes(t_free.begin(), t_free.end(), c.begin(), c.end())) return 0.0;
        }
    }

    // component reachable from the free target vars
    std::vector<VarId> comp = component_vars(t_free);
    std::unordered_set<size_t> clause_set;
    for (VarId v : comp) {
        auto it = var_clauses_.find(v);
        if (it == var_clauses_.end()) continue;
        for (size_t ci : it->second)
            if (active_[ci]) clause_set.insert(ci);
    }
    // analytic factor: free target vars in no clause
    int analytic = 0;
    std::vector<VarId> t_comp;
    for (VarId v : t_free) {
        auto it = var_clauses_.find(v);
        if (it == var_clauses_.end() || it->second.empty())
            ++analytic;
        else
            t_comp.push_back(v);
    }
    double factor = std::pow(p, analytic);
    if (clause_set.empty()) return factor;

    std::vector<size_t> clause_ids(clause_set.begin(), clause_set.end());
    std::sort(clause_ids.begin(), clause_ids.end());
    // variables actually appearing in the component clauses (plus targets)
    std::vector<VarId> vars;
    for (size_t ci : clause_ids) vars.insert(vars.end(), clauses_[ci].begin(), clauses_[ci].end());
    vars.insert(vars.end(), t_comp.begin(), t_comp.end());
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());

    int k = static_cast<int>(vars.size());
    int m = static_cast<int>(clause_ids.size());
    auto var_bit = [&](VarId v) {
        return static_cast<int>(std::lower_bound(vars.begin(), vars.end(), v) - vars.begin());
    };

    // prefer the cheaper exact route, subject to the work budget
    double enum_cost = std::ldexp(static_cast<double>(std::max(m, 1)), k);
    double ie_cost = std::ldexp(4.0, m);
    bool can_enum = k <= caps.max_enum_vars && enum_cost <= caps.max_work;
    bool can_ie = m <= caps.max_ie_clauses && ie_cost <= caps.max_work;
    if (!can_enum && !can_ie) return std::nullopt;

    if (can_enum && (enum_cost <= ie_cost || !can_ie)) {
        std::vector<uint64_t> clause_masks(m, 0);
        for (int i = 0; i < m; ++i)
            for (VarId v : clauses_[clause_ids[i]]) clause_masks[i] |= 1ULL << var_bit(v);
        uint64_t tmask = 0;
        for (VarId v : t_comp) tmask |= 1ULL << var_bit(v);
        std::vector<long double> wt(k + 1);
        for (int i = 0; i <= k; ++i)
            wt[i] = std::pow(static_cast<long double>(p), i) *
                    std::pow(static_cast<long double>(1.0 - p), k - i);
        long double num = 0, den = 0;
        uint64_t limit = 1ULL << k;
        for (uint64_t a = 0; a < limit; ++a) {
            bool ok = true;
            for (int i = 0; i < m; ++i)
                if ((a & clause_masks[i]) == clause_masks[i]) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            long double w = wt[std::popcount(a)];
            den += w;
            if ((a & tmask) == tmask) num += w;
        }
        if (den <= 0) return 0.0;
        return factor * static_cast<double>(num / den);
    }

    // inclusion-exclusion over clause subsets; exponent = |union of chosen
    // clause vars (plus targets for the numerator)|
    std::vector<std::vector<int>> clause_bits(m);
    for (int i = 0; i < m; ++i)
        for (VarId v : clauses_[clause_ids[i]]) clause_bits[i].push_back(var_bit(v));
    std::vector<char> in_t(k, 0);
    for (VarId v : t_comp) in_t[var_bit(v)] = 1;
    int t_count = static_cast<int>(t_comp.size());

    std::vector<long double> pw(k + t_count + 1);
    pw[0] = 1.0L;
    for (size_t i = 1; i < pw.size(); ++i) pw[i] = pw[i - 1] * static_cast<long double>(p);

    std::vector<int> cnt(k, 0);
    long double num = 0, den = 0;
    int union_size = 0;
    int extra_non_t = 0;  // union vars outside the target
    auto rec = [&](auto&& self, int idx, int sign) -> void {
        if (idx == m) {
            den += sign * pw[union_size];
            num += sign * pw[t_count + extra_non_t];
            return;
        }
        self(self, idx + 1, sign);  // exclude clause idx
        for (int b : clause_bits[idx])
            if (cnt[b]++ == 0) {
                ++union_size;
                if (!in_t[b]) ++extra_non_t;
            }
        self(self, idx + 1, -sign);  // include clause idx
        for (int b : clause_bits[idx])
            if (--cnt[b] == 0) {
                --union_size;
                if (!in_t[b]) --extra_non_t;
            }
    };
    rec(rec, 0, 1);
    if (den <= 0) return 0.0;
    double ratio = static_cast<double>(num / den);
    return factor * std::clamp(ratio, 0.0, 1.0);
}

}  // namespace cliquelab
