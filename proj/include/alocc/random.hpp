#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "alocc/tensor.hpp"

namespace alocc {

/// Deterministic random source: mt19937-64 with an explicit Box-Muller
/// gaussian so the sample stream depends only on the seed, not on the
/// standard library's distribution internals.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n).
    size_t uniform_index(size_t n) {
        return static_cast<size_t>(uniform() * static_cast<double>(n)) % n;
    }

    /// Standard normal via Box-Muller; one spare value is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// i.i.d. N(0, sigma^2) tensor; deterministic given the rng state.
template <class T>
Tensor<T> sample_gaussian(std::vector<int> shape, T sigma, Rng& rng) {
    if (sigma < T(0)) throw UsageError("sample_gaussian: sigma must be non-negative");
    Tensor<T> t(std::move(shape));
    if (sigma == T(0)) return t;
    for (auto& v : t.values()) v = static_cast<T>(rng.normal(0.0, static_cast<double>(sigma)));
    return t;
}

template <class T>
Tensor<T> sample_gaussian(std::vector<int> shape, T sigma, uint64_t seed) {
    Rng rng(seed);
    return sample_gaussian(std::move(shape), sigma, rng);
}

/// Fisher-Yates shuffle driven by Rng; stable across standard libraries.
template <class V>
void shuffle(std::vector<V>& v, Rng& rng) {
    for (size_t i = v.size(); i > 1; --i) {
        size_t j = rng.uniform_index(i);
        std::swap(v[i - 1], v[j]);
    }
}

/// Splitmix64 mix of (base, salt): independent sub-seeds from one user seed.
inline uint64_t derive_seed(uint64_t base, uint64_t salt) {
    uint64_t z = base + 0x9E3779B97F4A7C15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace alocc
