#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace cliquelab {

// Binomial coefficient as double (exact for the sizes used here).
inline double binom(int64_t n, int64_t k) {
    if (k < 0 || k > n) return 0.0;
    if (k > n - k) k = n - k;
    double r = 1.0;
    for (int64_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

inline uint64_t binom_u64(int64_t n, int64_t k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    uint64_t r = 1;
    for (int64_t i = 1; i <= k; ++i) {
        // multiply first, overflow-checked for desk-scale inputs
        uint64_t num = r * static_cast<uint64_t>(n - k + i);
        if (num / static_cast<uint64_t>(n - k + i) != r) throw std::overflow_error("binom_u64 overflow");
        r = num / static_cast<uint64_t>(i);
    }
    return r;
}

// Generalized binomial C(x, k) for real x via the falling-factorial product.
inline double binom_real(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= (x - i) / static_cast<double>(k - i);
    return r;
}

// Advance a strictly increasing k-subset of {1..n} to its lexicographic
// successor. Returns false when the last subset was given.
inline bool next_k_subset(std::vector<int>& c, int n) {
    int k = static_cast<int>(c.size());
    int i = k - 1;
    while (i >= 0 && c[i] == n - k + 1 + i) --i;
    if (i < 0) return false;
    ++c[i];
    for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
    return true;
}

inline std::vector<int> first_k_subset(int k) {
    std::vector<int> c(k);
    for (int i = 0; i < k; ++i) c[i] = i + 1;
    return c;
}

// All k-subsets of {1..n} in lexicographic order.
inline std::vector<std::vector<int>> all_k_subsets(int n, int k) {
    std::vector<std::vector<int>> out;
    if (k < 0 || k > n) return out;
    if (k == 0) {
        out.emplace_back();
        return out;
    }
    auto c = first_k_subset(k);
    out.reserve(binom_u64(n, k));
    do {
        out.push_back(c);
    } while (next_k_subset(c, n));
    return out;
}

}  // namespace cliquelab
