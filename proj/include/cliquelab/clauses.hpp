#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

namespace cliquelab {

using VarId = uint32_t;

struct ClauseCaps {
    int max_enum_vars = 26;    // direct enumeration over 2^k assignments
    int max_ie_clauses = 22;   // inclusion-exclusion over clause subsets
    double max_work = 4e6;     // per-query operation budget for either route
};

// Constraint state over Bernoulli(p) indicator variables:
//   - variables forced present / fixed absent,
//   - clauses "not all of these variables are present".
// Maintains the minimal normal form: unit clauses fix their variable absent,
// satisfied clauses are dropped, and absorbed (superset) clauses removed.
// Consistency is decidable by propagation alone, since with every active
// clause retaining a free variable, the all-absent assignment satisfies the
// system.
class ClauseSystem {
  public:
    enum class VarState : uint8_t { Free, Present, Absent };

    bool contradictory() const { return contradictory_; }
    VarState state(VarId v) const;

    void force_present(VarId v);
    void force_absent(VarId v);
    void add_clause(std::vector<VarId> vars, bool check_absorption = true);

    // Exact P(all of `target` present | constraints), with free variables
    // iid Bernoulli(p). Variables outside every clause integrate out
    // analytically; the clause component containing the target is evaluated
    // by enumeration or inclusion-exclusion. Returns nullopt above caps.
    std::optional<double> conditional_all_present(const std::vector<VarId>& target, double p,
                                                  const ClauseCaps& caps = {}) const;

    // Free variables of the clause component(s) reachable from `target`,
    // including the free target variables themselves.
    std::vector<VarId> component_vars(const std::vector<VarId>& target) const;

    std::vector<std::vector<VarId>> active_clauses() const;
    size_t active_clause_count() const;

    // Direct clause access for estimators that walk the index in place.
    const std::vector<size_t>* clause_ids_of(VarId v) const;
    const std::vector<VarId>& clause(size_t id) const { return clauses_[id]; }
    bool clause_active(size_t id) const { return active_[id] != 0; }

    // All variables this system has ever seen (for ensemble bookkeeping).
    std::vector<VarId> touched_vars() const;

  private:
    void satisfy_clause(size_t ci);
    void remove_var_from_clause(size_t ci, VarId v);
    void process_queue();

    std::unordered_map<VarId, VarState> states_;
    std::vector<std::vector<VarId>> clauses_;
    std::vector<char> active_;
    std::unordered_map<VarId, std::vector<size_t>> var_clauses_;
    std::vector<VarId> absent_queue_;
    bool contradictory_ = false;
    bool in_propagation_ = false;
};

}  // namespace cliquelab
