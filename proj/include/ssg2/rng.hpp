#pragma once
#include <cstdint>

namespace ssg2 {

// splitmix64: deterministic, seed-stable across platforms.
struct Rng {
    uint64_t state;
    explicit Rng(uint64_t seed = 0x9e3779b97f4a7c15ull) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    // uniform in [0, n)
    uint64_t below(uint64_t n) {
        if (n <= 1) return 0;
        uint64_t lim = UINT64_MAX - UINT64_MAX % n;
        uint64_t v;
        do { v = next(); } while (v >= lim);
        return v % n;
    }
    int64_t in(int64_t lo, int64_t hi) {  // inclusive range
        return lo + (int64_t)below((uint64_t)(hi - lo + 1));
    }
};

}  // namespace ssg2
