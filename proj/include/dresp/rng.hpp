#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "dresp/stats.hpp"

namespace dresp {

// splitmix64 finalizer, used as a cheap 64-bit mixer for seed derivation.
inline uint64_t mix64(uint64_t x) {
    uint64_t z = x + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Named-stream seed derivation: a master seed splits into independent
// streams, so adding e.g. more SPEM replications never perturbs the
// population draws. derive_seed(master, "population"),
// derive_seed(master, "gbm", k), derive_seed(rep_seed, "customer", id).
inline uint64_t derive_seed(uint64_t master, std::string_view stream) {
    return mix64(master ^ fnv1a64(stream));
}

inline uint64_t derive_seed(uint64_t master, std::string_view stream, uint64_t index) {
    return mix64(derive_seed(master, stream) ^ mix64(index + 1));
}

// Deterministic random stream. mt19937_64 has a standard-specified output
// sequence and uniforms/gaussians are produced by explicit arithmetic
// (not std::*_distribution), so draws are reproducible across platforms.
class RngStream {
public:
    explicit RngStream(uint64_t seed) : gen_(seed) {}

    // Uniform on the open interval (0,1), 53-bit resolution.
    double uniform01() {
        return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // Standard normal via inverse CDF.
    double gaussian() { return normal_quantile(uniform01()); }

    uint64_t next_u64() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

}  // namespace dresp
