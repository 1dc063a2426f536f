#include "cliquelab/sunify.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "json.hpp"

#include "cliquelab/combinatorics.hpp"

namespace cliquelab {

ChainVerdict suniform_chain(int n, int r, int s, uint64_t seed, const ChainOptions& opts) {
    if (!(r > s && s >= 3)) throw std::invalid_argument("need r > s >= 3");
    return chain_coupling_general(n, r, s, seed, opts);
}

std::string PartitionBoundReport::to_json() const {
    nlohmann::json j;
    j["r"] = r;
    j["s"] = s;
    j["pass"] = pass;
    nlohmann::json rows_json = nlohmann::json::array();
    for (const auto& row : rows)
        rows_json.push_back({{"t", row.t},
                             {"max_lhs", row.max_lhs},
                             {"rhs", row.rhs},
                             {"pass", row.pass},
                             {"argmax", row.argmax}});
    j["rows"] = std::move(rows_json);
    return j.dump();
}

namespace {

void enumerate_compositions(int remaining, int parts_left, int part_cap, std::vector<int>& cur,
                            const std::function<void(const std::vector<int>&)>& visit) {
    if (parts_left == 0) {
        if (remaining == 0) visit(cur);
        return;
    }
    int lo = std::max(1, remaining - (parts_left - 1) * part_cap);
    int hi = std::min(part_cap, remaining - (parts_left - 1));
    for (int c = lo; c <= hi; ++c) {
        cur.push_back(c);
        enumerate_compositions(remaining - c, parts_left - 1, part_cap, cur, visit);
        cur.pop_back();
    }
}

}  // namespace

PartitionBoundReport verify_partition_bound(int r, int s) {
    if (!(r > s && s >= 2)) throw std::invalid_argument("need r > s >= 2");
    PartitionBoundReport rep;
    rep.r = r;
    rep.s = s;
    for (int t = 2; t <= r - s + 1; ++t) {
        PartitionBoundRow row;
        row.t = t;
        row.rhs = static_cast<int64_t>(binom_u64(r - t + 1, s));
        int cap = r - t + 1;
        std::vector<int> cur;
        enumerate_compositions(r, t, cap, cur, [&](const std::vector<int>& c) {
            int64_t lhs = 0;
            for (int ci : c) lhs += static_cast<int64_t>(binom_u64(ci, s));
            if (lhs > row.max_lhs || row.argmax.empty()) {
                row.max_lhs = lhs;
                row.argmax = c;
            }
        });
        row.pass = row.max_lhs <= row.rhs;
        rep.pass = rep.pass && row.pass;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

std::string WFunctionReport::to_json() const {
    nlohmann::json j;
    j["r"] = r;
    j["s"] = s;
    j["w2"] = w2;
    j["w_right"] = w_right;
    j["w2_expected"] = w2_expected;
    j["w_right_expected"] = w_right_expected;
    j["grid_max"] = grid_max;
    j["endpoint_identities"] = endpoint_identities;
    j["convex"] = convex;
    j["max_at_two"] = max_at_two;
    j["all_negative"] = all_negative;
    j["pass"] = pass;
    return j.dump();
}

WFunctionReport verify_w_function(int r, int s, int grid_points) {
    if (!(r > s && s >= 3)) throw std::invalid_argument("need r > s >= 3");
    if (grid_points < 100) throw std::invalid_argument("need at least 100 grid points");
    WFunctionReport rep;
    rep.r = r;
    rep.s = s;
    double crs = binom(r, s);
    auto w = [&](double t) { return t - r + (r - 1) * binom_real(r - t + 1, s) / crs; };

    double lo = 2.0, hi = static_cast<double>(r - s + 1);
    rep.w2 = w(lo);
    rep.w_right = w(hi);
    rep.w2_expected = 1.0 - s + static_cast<double>(s) / r;
    rep.w_right_expected = 1.0 - s + static_cast<double>(r - 1) / crs;
    rep.endpoint_identities = std::abs(rep.w2 - rep.w2_expected) <= 1e-12 &&
                              std::abs(rep.w_right - rep.w_right_expected) <= 1e-12;

    rep.grid_max = rep.w2;
    bool convex = true, all_negative = true;
    std::vector<double> vals(grid_points);
    double step = (hi - lo) / (grid_points - 1);
    for (int i = 0; i < grid_points; ++i) {
        double t = lo + i * step;
        vals[i] = w(t);
        rep.grid_max = std::max(rep.grid_max, vals[i]);
        if (vals[i] >= 0) all_negative = false;
    }
    if (hi - lo > 1e-9) {
        for (int i = 1; i + 1 < grid_points; ++i)
            if (vals[i + 1] - 2 * vals[i] + vals[i - 1] <= 0) {
                convex = false;
                break;
            }
    }  // a single-point domain (r = s+1) is trivially convex
    rep.convex = convex;
    rep.all_negative = all_negative;
    rep.max_at_two = rep.grid_max <= rep.w2 + 1e-9 && rep.w2 + 1e-12 >= rep.w_right;
    rep.pass = rep.endpoint_identities && rep.convex && rep.max_at_two && rep.all_negative;
    return rep;
}

}  // namespace cliquelab
