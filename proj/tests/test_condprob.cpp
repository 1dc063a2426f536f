#include <cmath>
#include <stdexcept>

#include "doctest.h"

#include "cliquelab/clauses.hpp"
#include "cliquelab/combinatorics.hpp"
#include "cliquelab/condprob.hpp"
#include "cliquelab/rng.hpp"

using namespace cliquelab;

TEST_CASE("clause system normalization") {
    ClauseSystem sys;
    sys.add_clause({1, 2, 3});
    sys.force_present(1);
    sys.force_present(2);
    // clause reduced to the unit {3}: 3 becomes absent
    CHECK(sys.state(3) == ClauseSystem::VarState::Absent);
    CHECK(!sys.contradictory());
    sys.force_present(3);
    CHECK(sys.contradictory());

    ClauseSystem sat;
    sat.add_clause({1, 2});
    sat.force_absent(1);
    CHECK(sat.active_clause_count() == 0);  // satisfied and dropped

    ClauseSystem absorb;
    absorb.add_clause({1, 2, 3});
    absorb.add_clause({1, 2});      // absorbs the longer clause
    absorb.add_clause({1, 2, 4});   // implied, skipped
    CHECK(absorb.active_clause_count() == 1);
}

TEST_CASE("exact conditional probability examples") {
    // no conditioning
    CliqueConditioning cond;
    cond.n = 4;
    cond.r = 3;
    cond.p = 0.5;
    auto res = exact_conditional_prob(cond, {1, 2, 3});
    REQUIRE(res.ok());
    CHECK(res.value == doctest::Approx(0.125).epsilon(1e-12));

    // positive clique event forces the shared edge
    CliqueConditioning pos = cond;
    pos.positives = {{1, 2, 4}};
    res = exact_conditional_prob(pos, {1, 2, 3});
    REQUIRE(res.ok());
    CHECK(res.value == doctest::Approx(0.25).epsilon(1e-12));

    // negative clique event: p^3 (1-p^2) / (1-p^3)
    CliqueConditioning neg = cond;
    neg.negatives = {{1, 2, 4}};
    res = exact_conditional_prob(neg, {1, 2, 3});
    REQUIRE(res.ok());
    CHECK(res.value == doctest::Approx(0.125 * 0.75 / 0.875).epsilon(1e-12));
}

TEST_CASE("zero-probability conditioning is rejected") {
    CliqueConditioning cond;
    cond.n = 4;
    cond.r = 3;
    cond.p = 0.5;
    cond.positives = {{1, 2, 3}};
    cond.negatives = {{1, 2, 3}};
    CHECK_THROWS_AS(exact_conditional_prob(cond, {1, 2, 4}), std::invalid_argument);

    // forcing all edges of a negative clique is inconsistent too
    CliqueConditioning f;
    f.n = 4;
    f.r = 3;
    f.p = 0.5;
    f.negatives = {{1, 2, 3}};
    f.forced_edges = {{1, 2}, {1, 3}, {2, 3}};
    CHECK_THROWS_AS(exact_conditional_prob(f, {1, 2, 4}), std::invalid_argument);
}

TEST_CASE("relabeling invariance") {
    // swap vertices 1 <-> 5 in an asymmetric conditioning
    CliqueConditioning a;
    a.n = 5;
    a.r = 3;
    a.p = 0.37;
    a.positives = {{1, 2, 3}};
    a.negatives = {{2, 3, 4}};
    auto va = exact_conditional_prob(a, {1, 2, 4});

    CliqueConditioning b;
    b.n = 5;
    b.r = 3;
    b.p = 0.37;
    b.positives = {{2, 3, 5}};
    b.negatives = {{2, 3, 4}};
    auto vb = exact_conditional_prob(b, {2, 4, 5});
    REQUIRE(va.ok());
    REQUIRE(vb.ok());
    CHECK(va.value == doctest::Approx(vb.value).epsilon(1e-12));
}

TEST_CASE("adding positives never decreases an up-event (Harris direction)") {
    Rng rng(41);
    auto triples = all_k_subsets(5, 3);
    for (int trial = 0; trial < 50; ++trial) {
        CliqueConditioning cond;
        cond.n = 5;
        cond.r = 3;
        cond.p = 0.2 + 0.6 * rng.next_unit();
        Edge target = triples[static_cast<size_t>(rng.below(triples.size()))];
        auto base = exact_conditional_prob(cond, target);
        cond.positives.push_back(triples[static_cast<size_t>(rng.below(triples.size()))]);
        auto more = exact_conditional_prob(cond, target);
        REQUIRE(base.ok());
        REQUIRE(more.ok());
        CHECK(more.value >= base.value - 1e-12);
    }
}

TEST_CASE("monte carlo agrees with the exact engine") {
    // unconditioned sanity
    CliqueConditioning cond;
    cond.n = 4;
    cond.r = 3;
    cond.p = 0.5;
    auto mc = mc_conditional_prob(cond, {1, 2, 3}, 100000, 7);
    REQUIRE(mc.status == McCond::Status::Ok);
    CHECK(std::abs(mc.estimate - 0.125) <= 3.0 * mc.half_width);

    // determinism
    auto mc2 = mc_conditional_prob(cond, {1, 2, 3}, 100000, 7);
    CHECK(mc.estimate == mc2.estimate);

    // random conditionings at n=5
    Rng rng(13);
    auto triples = all_k_subsets(5, 3);
    int compared = 0;
    for (int trial = 0; trial < 50; ++trial) {
        CliqueConditioning c;
        c.n = 5;
        c.r = 3;
        c.p = 0.2 + 0.6 * rng.next_unit();
        c.positives = {triples[static_cast<size_t>(rng.below(triples.size()))]};
        Edge neg = triples[static_cast<size_t>(rng.below(triples.size()))];
        if (neg != c.positives[0]) c.negatives.push_back(neg);
        Edge target = triples[static_cast<size_t>(rng.below(triples.size()))];
        try {
            auto exact = exact_conditional_prob(c, target);
            auto est = mc_conditional_prob(c, target, 30000, 1000 + trial);
            REQUIRE(exact.ok());
            REQUIRE(est.status == McCond::Status::Ok);
            CHECK(std::abs(exact.value - est.estimate) <= 3.0 * std::max(est.half_width, 1e-4));
            ++compared;
        } catch (const std::invalid_argument&) {
            // inconsistent sample; both engines must agree on rejection
            CHECK_THROWS_AS(mc_conditional_prob(c, target, 100, 1), std::invalid_argument);
        }
    }
    CHECK(compared >= 30);
}

TEST_CASE("conditional given positives only stays above p^C(r,2)") {
    Rng rng(59);
    auto triples = all_k_subsets(5, 3);
    for (int trial = 0; trial < 30; ++trial) {
        CliqueConditioning c;
        c.n = 5;
        c.r = 3;
        c.p = 0.2 + 0.6 * rng.next_unit();
        c.positives = {triples[static_cast<size_t>(rng.below(triples.size()))],
                       triples[static_cast<size_t>(rng.below(triples.size()))]};
        Edge target = triples[static_cast<size_t>(rng.below(triples.size()))];
        auto v = exact_conditional_prob(c, target);
        REQUIRE(v.ok());
        CHECK(v.value >= std::pow(c.p, 3) - 1e-12);
    }
}

TEST_CASE("forbidden patterns act as not-all-present clauses") {
    CliqueConditioning cond;
    cond.n = 4;
    cond.r = 3;
    cond.p = 0.5;
    // forbid the pattern {12, 13} from being fully present
    cond.forbidden_patterns = {{{1, 2}, {1, 3}}};
    auto res = exact_conditional_prob(cond, {1, 2, 3});
    REQUIRE(res.ok());
    // A_123 needs 12, 13, 23 all present, but {12,13} complete is forbidden
    CHECK(res.value == doctest::Approx(0.0));
}

TEST_CASE("harris check") {
    // identical events: gap = p - p^2
    auto both = [](const std::vector<uint8_t>& w) { return w[0] == 1; };
    auto rep = harris_check(3, {0.3, 0.3, 0.3}, both, both, 200000, 5);
    CHECK(std::abs(rep.gap - 0.21) <= rep.gap_hw);

    // complementary events: gap <= 0
    auto a = [](const std::vector<uint8_t>& w) { return w[0] == 1; };
    auto b = [](const std::vector<uint8_t>& w) { return w[0] == 0; };
    auto rep2 = harris_check(3, {0.3, 0.3, 0.3}, a, b, 100000, 6);
    CHECK(rep2.p_ab == 0.0);
    CHECK(rep2.gap < 0);

    // random monotone threshold events over 10 variables
    Rng rng(67);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> probs(10);
        for (auto& p : probs) p = 0.2 + 0.6 * rng.next_unit();
        int ka = 1 + static_cast<int>(rng.below(9));
        int kb = 1 + static_cast<int>(rng.below(9));
        auto up_a = [ka](const std::vector<uint8_t>& w) {
            int c = 0;
            for (auto x : w) c += x;
            return c >= ka;
        };
        auto up_b = [kb](const std::vector<uint8_t>& w) {
            int c = 0;
            for (auto x : w) c += x;
            return c >= kb;
        };
        auto r = harris_check(10, probs, up_a, up_b, 20000, 100 + trial);
        CHECK(r.gap >= -r.gap_hw);
    }
}

TEST_CASE("exact engine inclusion-exclusion path matches enumeration") {
    // force the IE route by shrinking the enumeration cap
    Rng rng(71);
    auto triples = all_k_subsets(6, 3);
    for (int trial = 0; trial < 40; ++trial) {
        CliqueConditioning c;
        c.n = 6;
        c.r = 3;
        c.p = 0.2 + 0.6 * rng.next_unit();
        for (int i = 0; i < 3; ++i) {
            Edge e = triples[static_cast<size_t>(rng.below(triples.size()))];
            c.negatives.push_back(e);
        }
        Edge target = triples[static_cast<size_t>(rng.below(triples.size()))];
        ClauseCaps enum_caps{26, 0};   // enumeration only
        ClauseCaps ie_caps{0, 22};     // inclusion-exclusion only
        try {
            auto a = exact_conditional_prob(c, target, enum_caps);
            auto b = exact_conditional_prob(c, target, ie_caps);
            if (a.ok() && b.ok()) CHECK(a.value == doctest::Approx(b.value).epsilon(1e-10));
        } catch (const std::invalid_argument&) {
            // inconsistent conditioning sampled; fine
        }
    }
}

TEST_CASE("cap exceeded reports too-large instead of guessing") {
    CliqueConditioning cond;
    cond.n = 5;
    cond.r = 3;
    cond.p = 0.4;
    cond.negatives = {{1, 2, 3}, {2, 3, 4}, {3, 4, 5}};
    ClauseCaps tiny{1, 0, 1e3};
    auto res = exact_conditional_prob(cond, {1, 2, 4}, tiny);
    CHECK(res.status == ExactCond::Status::TooLarge);
}

TEST_CASE("zero acceptances is an explicit outcome") {
    CliqueConditioning cond;
    cond.n = 4;
    cond.r = 3;
    cond.p = 0.99999;
    cond.negatives = {{1, 2, 3}};
    auto res = mc_conditional_prob(cond, {1, 2, 4}, 5, 42);
    CHECK((res.status == McCond::Status::NoAcceptances || res.accepted > 0));
    bool saw_empty = false;
    for (uint64_t seed = 0; seed < 50 && !saw_empty; ++seed)
        saw_empty = mc_conditional_prob(cond, {1, 2, 4}, 3, seed).status ==
                    McCond::Status::NoAcceptances;
    CHECK(saw_empty);
}
