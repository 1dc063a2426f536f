#include <cmath>
#include <set>
#include <stdexcept>

#include "doctest.h"

#include "cliquelab/combinatorics.hpp"
#include "cliquelab/condprob.hpp"
#include "cliquelab/coupling.hpp"
#include "cliquelab/detectors.hpp"
#include "cliquelab/process.hpp"
#include "cliquelab/rng.hpp"
#include "cliquelab/stats.hpp"

using namespace cliquelab;

namespace {

bool contained_in_cliques(const CoupledOutcome& out) {
    auto cl = cliques(out.G, out.r);
    for (const auto& h : out.H.edges())
        if (!cl.contains(h)) return false;
    return true;
}

}  // namespace

TEST_CASE("riordan couple determinism and contracts") {
    CHECK_THROWS_AS(riordan_couple(8, 3, 0.4, 1), std::invalid_argument);

    auto a = riordan_couple(8, 4, 0.55, 42);
    auto b = riordan_couple(8, 4, 0.55, 42);
    CHECK(a.H == b.H);
    CHECK(a.G == b.G);
    CHECK(a.failed == b.failed);
    REQUIRE(a.history.size() == binom_u64(8, 4));
    for (size_t i = 0; i < a.history.size(); ++i) {
        CHECK(a.history[i].pi_j == b.history[i].pi_j);
        CHECK(a.history[i].answer == b.history[i].answer);
    }
    auto c = riordan_couple(8, 4, 0.55, 43);
    CHECK((a.H.edges() != c.H.edges() || a.G.edges() != c.G.edges()));
}

TEST_CASE("non-failed couplings have H inside cl(G) exactly") {
    int failed = 0;
    for (uint64_t seed = 0; seed < 40; ++seed) {
        auto out = riordan_couple(7, 4, 0.5, seed);
        if (out.failed) {
            ++failed;
            continue;
        }
        CHECK(contained_in_cliques(out));
        // history bookkeeping: yes-steps are exactly the included ones
        for (const auto& st : out.history) {
            if (st.answer == 1) CHECK(st.included);
            if (st.answer == 0) CHECK(!st.included);
        }
    }
    CHECK(failed <= 5);

    // near the critical window the failure branch fires much more often at
    // desk scale; non-failed runs still satisfy containment exactly
    auto wp = window_params(9, 4, 2, 0.027);
    int checked = 0;
    for (uint64_t seed = 0; seed < 20; ++seed) {
        auto out = riordan_couple(9, 4, wp.p_plus, seed);
        if (out.failed) continue;
        ++checked;
        CHECK(contained_in_cliques(out));
    }
    CHECK(checked >= 10);
}

TEST_CASE("coupling marginals at small scale") {
    // each hyperedge lands in H with probability pi; chi-square over seeds
    const int trials = 600;
    const int n = 7, r = 4;
    const double p = 0.5, delta = 0.1;
    double pi = (1.0 - std::pow(7.0, -delta)) * std::pow(p, 6.0);
    auto all = all_k_subsets(n, r);
    std::vector<uint64_t> counts(all.size(), 0);
    CoupleOptions opts;
    opts.keep_history = false;
    for (int seed = 0; seed < trials; ++seed) {
        auto out = riordan_couple(n, r, p, static_cast<uint64_t>(seed), opts);
        for (size_t i = 0; i < all.size(); ++i)
            if (out.H.contains(all[i])) ++counts[i];
    }
    double stat = binomial_cells_chi_square(counts, trials, pi);
    CHECK(stat < chi_square_quantile(0.999, static_cast<int>(all.size())));
}

TEST_CASE("graph marginal of the coupling is G(n,p)") {
    // per-edge presence frequency in G
    const int trials = 600;
    const int n = 7, r = 4;
    const double p = 0.5;
    auto pairs = all_k_subsets(n, 2);
    std::vector<uint64_t> counts(pairs.size(), 0);
    CoupleOptions opts;
    opts.keep_history = false;
    for (int seed = 0; seed < trials; ++seed) {
        auto out = riordan_couple(n, r, p, static_cast<uint64_t>(seed) + 5000, opts);
        for (size_t i = 0; i < pairs.size(); ++i)
            if (out.G.contains(pairs[i])) ++counts[i];
    }
    double stat = binomial_cells_chi_square(counts, trials, p);
    CHECK(stat < chi_square_quantile(0.999, static_cast<int>(pairs.size())));
}

TEST_CASE("extra-clique bound on runs conditioned on the empty hypergraph") {
    // P(A_j | H = empty) <= (pi_j* - pi)/(1 - pi) + 3 CI, first step exact
    const int n = 6, r = 4;
    const double p = 0.3, delta = 0.1;
    double pi = (1.0 - std::pow(6.0, -delta)) * std::pow(p, 6.0);
    const int trials = 4000;
    auto all = all_k_subsets(n, r);
    Edge target = all[0];
    uint64_t empty_runs = 0, aj_holds = 0;
    CoupleOptions opts;
    opts.keep_history = false;
    for (int seed = 0; seed < trials; ++seed) {
        auto out = couple_plain(n, r, 2, p, static_cast<uint64_t>(seed), opts);
        if (out.failed || out.H.size() != 0) continue;
        ++empty_runs;
        if (cliques(out.G, r).contains(target)) ++aj_holds;
    }
    REQUIRE(empty_runs > trials / 2);
    double freq = static_cast<double>(aj_holds) / static_cast<double>(empty_runs);
    double star = std::pow(p, 6.0);  // no forced edges
    double bound = (star - pi) / (1.0 - pi);
    double ci = 1.959964 * std::sqrt(std::max(freq * (1 - freq), 1e-9) / empty_runs);
    CHECK(freq <= bound + 3 * ci);
}

TEST_CASE("pi_star") {
    UniformHypergraph h0(8, 4, {{1, 2, 3, 4}});
    CHECK(pi_star(h0, {5, 6, 7, 8}, 0.3) == doctest::Approx(std::pow(0.3, 6)).epsilon(1e-12));
    CHECK(pi_star(h0, {1, 2, 3, 5}, 0.3) == doctest::Approx(std::pow(0.3, 3)).epsilon(1e-12));
    CHECK_THROWS_AS(pi_star(h0, {1, 2, 3, 4}, 0.3), std::invalid_argument);

    // agreement with the exact conditional engine
    Rng rng(83);
    auto rsets3 = all_k_subsets(6, 3);
    auto rsets4 = all_k_subsets(6, 4);
    for (int trial = 0; trial < 50; ++trial) {
        int r = trial % 2 == 0 ? 3 : 4;
        const auto& rsets = r == 3 ? rsets3 : rsets4;
        std::vector<Edge> edges;
        size_t cnt = 1 + rng.below(3);
        for (size_t i = 0; i < cnt; ++i)
            edges.push_back(rsets[static_cast<size_t>(rng.below(rsets.size()))]);
        UniformHypergraph h(6, r, edges);
        Edge target;
        do {
            target = rsets[static_cast<size_t>(rng.below(rsets.size()))];
        } while (h.contains(target));
        double p = 0.2 + 0.6 * rng.next_unit();
        CliqueConditioning cond;
        cond.n = 6;
        cond.r = r;
        cond.p = p;
        cond.positives = h.edges();
        auto exact = exact_conditional_prob(cond, target);
        REQUIRE(exact.ok());
        CHECK(std::abs(pi_star(h, target, p) - exact.value) <= 1e-12);
    }
}

TEST_CASE("extra clique sum") {
    UniformHypergraph empty(8, 4, {});
    CHECK(extra_clique_sum(empty, 1, 0.3) == 0.0);

    // full enumeration oracle at n=8, r=4
    UniformHypergraph h0(8, 4, {{1, 2, 3, 4}});
    double direct = 0;
    auto all = all_k_subsets(8, 4);
    double base = std::pow(0.3, 6.0);
    for (const auto& h : all) {
        if (std::find(h.begin(), h.end(), 1) == h.end()) continue;
        if (h0.contains(h)) continue;
        direct += pi_star(h0, h, 0.3) - base;
    }
    CHECK(extra_clique_sum(h0, 1, 0.3) == doctest::Approx(direct).epsilon(1e-12));

    // also with a richer H0
    UniformHypergraph h1(8, 4, {{1, 2, 3, 4}, {3, 4, 5, 6}, {2, 5, 7, 8}});
    for (int v : {1, 2, 5}) {
        double slow = 0;
        for (const auto& h : all) {
            if (std::find(h.begin(), h.end(), v) == h.end()) continue;
            if (h1.contains(h)) continue;
            slow += pi_star(h1, h, 0.4) - std::pow(0.4, 6.0);
        }
        CHECK(extra_clique_sum(h1, v, 0.4) == doctest::Approx(slow).epsilon(1e-11));
    }
}

TEST_CASE("extra clique sum regression diagnostic") {
    // Monitored statistic: asymptotically the sum decays like n^(-s) with
    // s = min(2/r, 1-2/r). At n <= 40 the candidate count still grows
    // faster than p_+ falls, so the measured slope is positive; report it
    // without failing (the decay needs n far beyond desk scale).
    const int r = 3;
    double s_exp = std::min(2.0 / r, 1.0 - 2.0 / r);
    std::vector<double> ns = {20, 30, 40}, means;
    for (double nd : ns) {
        int n = static_cast<int>(nd);
        auto wp = window_params(n, r, 2, 0.1);
        double total = 0;
        int used = 0;
        for (uint64_t seed = 0; seed < 12; ++seed) {
            auto trace = standard_process(n, r, seed);
            auto H = trace.prefix(trace.prefix_count(wp.pi_plus));
            double value = extra_clique_sum(H, 1 + static_cast<int>(seed) % n, wp.p_plus);
            if (value > 0) {
                total += value;
                ++used;
            }
        }
        REQUIRE(used > 0);
        means.push_back(total / used);
        CHECK(means.back() > 0);
    }
    double slope = (std::log(means.back()) - std::log(means.front())) /
                   (std::log(ns.back()) - std::log(ns.front()));
    WARN_MESSAGE(slope <= -s_exp + 0.3,
                 "asymptotic slope bound not yet visible at n <= 40: slope = ", slope);
}

TEST_CASE("classify extra cliques") {
    // clique expansion of a clean 3-cycle: one extra, the middle triangle
    UniformHypergraph cyc(6, 3, {{1, 2, 3}, {3, 4, 5}, {5, 6, 1}});
    auto g = clique_expansion(cyc, 2);
    auto cls = classify_extra_cliques(g, cyc);
    REQUIRE(cls.size() == 1);
    CHECK(cls[0].first == Edge{1, 3, 5});
    CHECK(cls[0].second == ExtraCliqueClass::MiddleTriangle);

    // expansion of an overlapping pair (r=4): any extras are avoidable-
    // witnessed (this pair's expansion has none; K5 minus one hyperedge has
    // exactly one, and the dense H carries the avoidable witness)
    UniformHypergraph pair(6, 4, {{1, 2, 3, 4}, {2, 3, 4, 5}});
    auto cls4 = classify_extra_cliques(clique_expansion(pair, 2), pair);
    for (const auto& [t, c] : cls4) CHECK(c == ExtraCliqueClass::AvoidableConfig);
    UniformHypergraph dense(5, 4, {{1, 2, 3, 4}, {1, 2, 3, 5}, {1, 2, 4, 5}, {1, 3, 4, 5}});
    auto cls5 = classify_extra_cliques(clique_expansion(dense, 2), dense);
    REQUIRE(cls5.size() == 1);
    CHECK(cls5[0].first == Edge{2, 3, 4, 5});
    CHECK(cls5[0].second == ExtraCliqueClass::AvoidableConfig);

    // two disjoint edges: no extras
    UniformHypergraph disj(8, 4, {{1, 2, 3, 4}, {5, 6, 7, 8}});
    CHECK(classify_extra_cliques(clique_expansion(disj, 2), disj).empty());
}

TEST_CASE("modified r=3 coupling determinism and recorded probabilities") {
    auto wp = window_params(9, 3, 2, 0.1);
    auto a = modified_couple_r3(9, wp.p_plus, 11);
    auto b = modified_couple_r3(9, wp.p_plus, 11);
    CHECK(a.H == b.H);
    CHECK(a.G == b.G);
    CHECK(a.failed == b.failed);
    CHECK(a.cycle_step_ran);

    int steps_checked = 0, zero_prime_checked = 0, d_violations = 0, d_steps = 0;
    int mismatches = 0;
    for (uint64_t seed = 0; seed < 30; ++seed) {
        auto out = modified_couple_r3(9, wp.p_plus, seed);
        mismatches += out.failure_reason == FailureReason::CycleMismatch;
        bool failed_yet = out.failure_reason == FailureReason::CycleMismatch;
        for (const auto& st : out.history) {
            CHECK(st.pi_j_prime <= out.pi + 1e-12);
            // the recorded-probability relations hold until the first failure
            if (!failed_yet) {
                ++steps_checked;
                // pi_j' = 0 forces pi_j = 0 (the last missing hyperedge of a
                // forbidden cycle corresponds to its last missing triangle)
                if (st.pi_j_prime <= 1e-15) {
                    ++zero_prime_checked;
                    CHECK(st.pi_j <= 1e-15);
                }
                if (st.pi_j + 1e-12 < st.pi_j_prime) {
                    ++d_steps;
                    d_violations += st.pi_j > 1e-12;
                }
            }
            if (st.included && st.answer == -1 && st.pi_j < st.pi_j_prime) failed_yet = true;
        }
    }
    CHECK(steps_checked > 0);
    WARN_MESSAGE(mismatches <= 2, "cycle-collection mismatches in 30 runs: ", mismatches);
    // "pi_j < pi_j' implies pi_j = 0" rests on a relative-error estimate that
    // only takes hold asymptotically; desk-scale counterexamples with exact
    // conditionals are real, so the rate is reported rather than asserted
    WARN_MESSAGE(d_violations == 0, "desk-scale case-2 steps with pi_j > 0: ", d_violations,
                 " of ", d_steps);
}

TEST_CASE("failed r>=4 runs point at B1 or B2 of the revealed hypergraph") {
    auto wp = window_params(9, 4, 2, 0.1);
    int failures = 0, flagged = 0;
    CoupleOptions opts;
    opts.keep_history = false;
    for (uint64_t seed = 0; seed < 400 && failures < 12; ++seed) {
        auto out = riordan_couple(9, 4, wp.p_plus, seed, opts);
        if (!out.failed) continue;
        ++failures;
        auto f = bad_events(out.H, out.pi, g_default(9));
        flagged += (f.b1 || f.b2);
    }
    if (failures > 0) CHECK(flagged == failures);
}

TEST_CASE("outcome json carries the audit trail") {
    auto out = riordan_couple(7, 4, 0.5, 3);
    auto json = out.to_json();
    CHECK(json.find("\"history\"") != std::string::npos);
    CHECK(json.find("\"pi_j\"") != std::string::npos);
    CHECK(json.find("\"failure_reason\"") != std::string::npos);
}

TEST_CASE("low-degree vertices meeting extra cliques, monitored at n=60") {
    // asymptotically no low-degree vertex of H touches a clique of G that H
    // does not explain; at n=60 the extra-clique density is still governed
    // by the n^-delta window gap, so the frequency is reported, not pinned
    auto wp = window_params(60, 3, 2, 0.9);
    int incident = 0;
    const int trials = 25;
    for (uint64_t seed = 0; seed < trials; ++seed) {
        auto out = monotone_couple(60, 3, 2, wp.p_plus, seed, 0.9);
        auto low = low_degree_vertices(out.H, wp.g_value);
        std::vector<char> is_low(61, 0);
        for (int v : low) is_low[v] = 1;
        auto cl = cliques(out.G, 3);
        bool hit = false;
        for (const auto& t : cl.edges()) {
            if (out.H.contains(t)) continue;
            for (int v : t)
                if (is_low[v]) hit = true;
        }
        incident += hit;
    }
    WARN_MESSAGE(incident <= trials / 10,
                 "low-degree vertices still meet extra cliques at n=60: ", incident, "/", trials);
}
