#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace scimatch {

// splitmix64 step, used both as a seed mixer and to bootstrap engines.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Sub-seed for replicate/stream `k` of a run seeded with `seed`.
// Replicates drawn this way are independent streams, so they can be
// computed in any order (or in parallel) without changing results.
inline uint64_t sub_seed(uint64_t seed, uint64_t k) {
    return mix64(seed ^ mix64(k + 1));
}

// mt19937_64 with portable bounded sampling. std::uniform_int_distribution
// is implementation-defined, which would break the same-seed same-bytes
// guarantee, so bounded draws are done by rejection here instead.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(mix64(seed)) {}

    uint64_t next_u64() { return eng_(); }

    // uniform in [0, n), n > 0
    uint64_t below(uint64_t n) {
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t v;
        do {
            v = eng_();
        } while (v >= limit);
        return v % n;
    }

    int range(int lo, int hi) {  // inclusive ends
        return lo + static_cast<int>(below(static_cast<uint64_t>(hi - lo + 1)));
    }

    // uniform in [0, 1), 53-bit mantissa
    double u01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

    bool bernoulli(double p) { return u01() < p; }

    // Knuth multiplication method; fine for the small rates used here.
    int poisson(double lambda) {
        if (lambda <= 0.0) return 0;
        if (lambda > 30.0) {
            // normal approximation keeps the draw O(1) for large rates
            double v = lambda + std::sqrt(lambda) * normal();
            return v < 0.0 ? 0 : static_cast<int>(std::lround(v));
        }
        const double cutoff = std::exp(-lambda);
        int k = 0;
        double prod = u01();
        while (prod > cutoff) {
            ++k;
            prod *= u01();
        }
        return k;
    }

    double normal() {
        // Box-Muller, one value per call (the spare is dropped to keep
        // the draw sequence position-independent)
        double u1 = u01(), u2 = u01();
        while (u1 <= 0.0) u1 = u01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    // Fisher-Yates partial shuffle of the first k slots.
    template <typename T>
    void shuffle_prefix(std::vector<T>& v, size_t k) {
        if (v.empty()) return;
        if (k > v.size()) k = v.size();
        for (size_t i = 0; i < k; ++i) {
            size_t j = i + static_cast<size_t>(below(v.size() - i));
            std::swap(v[i], v[j]);
        }
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        shuffle_prefix(v, v.size());
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace scimatch
