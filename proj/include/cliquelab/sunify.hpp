#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cliquelab/time_coupling.hpp"

namespace cliquelab {

// The chain over the s-uniform base process (r > s >= 3): window parameters
// use the exponent 1/C(r,s) and no dummy machinery engages unless base edges
// are shared.
ChainVerdict suniform_chain(int n, int r, int s, uint64_t seed, const ChainOptions& opts = {});

struct PartitionBoundRow {
    int t = 0;
    int64_t max_lhs = 0;
    int64_t rhs = 0;
    bool pass = false;
    std::vector<int> argmax;  // a composition attaining max_lhs
};

struct PartitionBoundReport {
    int r = 0, s = 0;
    std::vector<PartitionBoundRow> rows;
    bool pass = true;

    std::string to_json() const;
};

// Exhaustive check of sum C(c_i, s) <= C(r-t+1, s) over all t in
// {2..r-s+1} and compositions (c_1..c_t) of r with parts in {1..r-t+1}.
PartitionBoundReport verify_partition_bound(int r, int s);

struct WFunctionReport {
    int r = 0, s = 0;
    double w2 = 0;               // w(2)
    double w_right = 0;          // w(r-s+1)
    double w2_expected = 0;      // 1 - s + s/r
    double w_right_expected = 0; // 1 - s + (r-1)/C(r,s)
    double grid_max = 0;
    bool endpoint_identities = false;
    bool convex = false;
    bool max_at_two = false;
    bool all_negative = false;
    bool pass = false;

    std::string to_json() const;
};

// Grid verification of w(t) = t - r + (r-1) C(r-t+1, s)/C(r,s) on
// [2, r-s+1], with the real-argument binomial in falling-factorial form.
WFunctionReport verify_w_function(int r, int s, int grid_points = 512);

}  // namespace cliquelab
