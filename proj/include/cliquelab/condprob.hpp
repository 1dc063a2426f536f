#pragma once

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "cliquelab/clauses.hpp"
#include "cliquelab/hypergraph.hpp"

namespace cliquelab {

// Bijection between the k-subsets of [n] (lexicographic order) and VarIds.
class EdgeIndexer {
  public:
    EdgeIndexer(int n, int k);

    VarId id(const Edge& e) const;
    const Edge& edge(VarId v) const { return list_[v]; }
    size_t count() const { return list_.size(); }
    int n() const { return n_; }
    int k() const { return k_; }

    // VarIds of all k-subsets of the given vertex set.
    std::vector<VarId> expansion(const Edge& vertices) const;

  private:
    int n_, k_;
    std::vector<Edge> list_;
    std::unordered_map<uint64_t, VarId> index_;
};

// Conditioning over the product space of edge indicators: clique events
// forced true / false, individual edges forced present, and edge-set
// families conditioned not-all-present.
struct CliqueConditioning {
    int n = 0;
    double p = 0.5;
    int r = 3;
    int base_arity = 2;
    std::vector<Edge> positives;   // r-sets whose clique events hold
    std::vector<Edge> negatives;   // r-sets whose clique events fail
    std::vector<Edge> forced_edges;
    std::vector<std::vector<Edge>> forbidden_patterns;
};

struct ExactCond {
    enum class Status { Ok, TooLarge };
    Status status = Status::Ok;
    double value = 0;
    int free_vars = 0;

    bool ok() const { return status == Status::Ok; }
};

// Exact conditional probability of the target's clique event. Weighted
// enumeration over the free edges the conditioning actually couples to the
// target; everything else integrates out analytically. Throws on
// zero-probability conditioning; reports TooLarge above the cap.
ExactCond exact_conditional_prob(const CliqueConditioning& cond, const Edge& target,
                                 const ClauseCaps& caps = {});

struct McCond {
    enum class Status { Ok, NoAcceptances };
    Status status = Status::Ok;
    double estimate = 0;
    double half_width = 0;
    uint64_t accepted = 0;
    uint64_t trials = 0;
};

// Rejection-sampling fallback with a 95% normal-approximation half-width.
McCond mc_conditional_prob(const CliqueConditioning& cond, const Edge& target, uint64_t trials,
                           uint64_t seed);

struct HarrisReport {
    double p_a = 0, p_b = 0, p_ab = 0;
    double hw_a = 0, hw_b = 0, hw_ab = 0;
    double gap = 0;      // P(A and B) - P(A)P(B)
    double gap_hw = 0;   // conservative half-width for the gap
    uint64_t trials = 0;
};

using EventOracle = std::function<bool(const std::vector<uint8_t>&)>;

// Monte Carlo check of the correlation inequality for monotone events over
// a product of Bernoulli(probs[i]) coordinates. A test utility, not a proof.
HarrisReport harris_check(int n_vars, const std::vector<double>& probs, const EventOracle& a,
                          const EventOracle& b, uint64_t trials, uint64_t seed);

}  // namespace cliquelab
