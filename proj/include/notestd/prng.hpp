#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace notestd {

// Deterministic draws on top of std::mt19937_64. The standard pins the
// mt19937_64 sequence, but distribution classes vary across library
// implementations, so bounded ints and normals are derived here by hand.
class Prng {
public:
    explicit Prng(std::uint64_t seed) : gen_(seed), base_seed_mix_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, n). Rejection sampling, no modulo bias.
    std::uint64_t bounded(std::uint64_t n) {
        if (n == 0) return 0;
        const std::uint64_t threshold = (0ULL - n) % n;
        for (;;) {
            std::uint64_t r = gen_();
            if (r >= threshold) return r % n;
        }
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Box-Muller.
    double normal(double mean, double sd) {
        double u1 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        double u2 = uniform();
        double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
        return mean + sd * z;
    }

    // Split off an independent stream for item `index`.
    Prng split(std::uint64_t index) const {
        std::uint64_t mix = base_seed_mix_ ^ (0x9E3779B97F4A7C15ULL * (index + 1));
        mix ^= mix >> 30;
        mix *= 0xBF58476D1CE4E5B9ULL;
        mix ^= mix >> 27;
        mix *= 0x94D049BB133111EBULL;
        mix ^= mix >> 31;
        return Prng(mix);
    }

private:
    std::mt19937_64 gen_;
    std::uint64_t base_seed_mix_ = 0;
};

// Partial Fisher-Yates: first `k` slots of a shuffled index vector.
template <typename T>
void partial_shuffle(std::vector<T>& items, std::size_t k, Prng& rng) {
    const std::size_t n = items.size();
    for (std::size_t i = 0; i < k && i + 1 < n; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.bounded(n - i));
        std::swap(items[i], items[j]);
    }
}

} // namespace notestd
