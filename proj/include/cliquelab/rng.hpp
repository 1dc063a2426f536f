#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace cliquelab {

// SplitMix64 (Steele, Lea, Flood). Used for seed expansion and stream
// derivation; the per-trial streams below must not change across platforms
// or thread counts, so we avoid std:: distributions entirely.
struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

// xoshiro256++ with splitmix-expanded seeding.
class Rng {
  public:
    explicit Rng(uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
    }

    // Derive an independent stream for (master_seed, stream_index).
    // Streams are order-independent, so trials can run on any worker.
    static Rng stream(uint64_t master_seed, uint64_t stream_index) {
        SplitMix64 sm(master_seed);
        uint64_t a = sm.next();
        uint64_t b = sm.next();
        return Rng(a ^ (b + 0x9e3779b97f4a7c15ULL * (stream_index + 1)));
    }

    uint64_t next_u64() {
        uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform double in [0,1) with 53-bit resolution.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_unit() < p; }

    // Unbiased integer in [0, bound) by rejection.
    uint64_t below(uint64_t bound) {
        if (bound <= 1) return 0;
        uint64_t threshold = (0ULL - bound) % bound;
        for (;;) {
            uint64_t x = next_u64();
            if (x >= threshold) return x % bound;
        }
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<uint64_t, 4> s_{};
};

}  // namespace cliquelab
