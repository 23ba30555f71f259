#pragma once

#include <cstdint>
#include <vector>

namespace areal {

/// Inverse of the standard normal CDF (Wichura's AS241, PPND16 variant).
/// Accurate to about 1e-15 over (0,1).
double inv_normal_cdf(double p);

/// Counter-based uniform stream: splitmix64 applied to seed + counter.
/// Every draw is addressed by an explicit counter, so consumers can be
/// evaluated in any order (or in parallel) and still reproduce the same
/// stream.  Normal variates are inverse-CDF transforms of the uniform
/// stream, which keeps generated fixtures portable across languages.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t bits(std::uint64_t k) const {
        std::uint64_t z = seed_ + (k + 1) * 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in the open interval (0,1); never returns 0 or 1.
    double uniform(std::uint64_t k) const {
        return (static_cast<double>(bits(k) >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal(std::uint64_t k) const { return inv_normal_cdf(uniform(k)); }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
};

/// Mixes (seed, a, b) into a fresh sub-seed for nested deterministic streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

/// Fisher-Yates shuffle driven by the counter stream starting at counter0.
/// Consumes exactly a.size()-1 uniforms.
template <typename T>
void counter_shuffle(std::vector<T>& a, const CounterRng& rng,
                     std::uint64_t counter0 = 0) {
    std::uint64_t k = counter0;
    for (std::size_t t = a.size(); t > 1; --t) {
        auto j = static_cast<std::size_t>(rng.uniform(k++) * static_cast<double>(t));
        if (j >= t) j = t - 1;
        std::swap(a[t - 1], a[j]);
    }
}

}  // namespace areal
