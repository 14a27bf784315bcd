#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace medal {

/// 64-bit FNV-1a. Used for content-derived identifiers and rng stream
/// derivation so results do not depend on platform hashing.
inline std::uint64_t fnv1a64(std::string_view data,
                             std::uint64_t seed = 1469598103934665603ULL) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= static_cast<std::uint64_t>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

/// Deterministic splitmix64 generator. std:: distributions are
/// implementation-defined, so all bounded draws are done here by hand.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [0, n). n must be > 0. Rejection sampling keeps
    /// the draw unbiased.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = next();
        while (v >= limit) v = next();
        return v % n;
    }

    /// Uniform double in [0, 1).
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool coin() { return (next() & 1) != 0; }

    /// Independent child stream tagged by a label; forking depends only on
    /// the original seed and the tag, never on how much this stream was used.
    Rng fork(std::string_view tag) const {
        return Rng(fnv1a64(tag, seed_ ^ 0x5851f42d4c957f2dULL));
    }

    /// Partial Fisher-Yates: k distinct indices out of [0, n).
    std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k) {
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        if (k > n) k = n;
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t j = i + static_cast<std::size_t>(below(n - i));
            std::swap(idx[i], idx[j]);
        }
        idx.resize(k);
        return idx;
    }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::uint64_t state_;
};

}  // namespace medal
