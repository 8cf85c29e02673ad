#pragma once

#include <cstdint>

namespace bcsat {

// Deterministic 64-bit generator (splitmix64). std::mt19937 + distributions are
// avoided on purpose: distribution output is not pinned across standard library
// implementations, and reproducibility across platforms is a hard requirement.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound). Rejection sampling, so exactly uniform for any bound.
    std::uint64_t next_below(std::uint64_t bound) {
        // bound == 0 would loop forever; treat as a caller bug.
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
        std::uint64_t x = next_u64();
        while (x > limit) x = next_u64();
        return x % bound;
    }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(next_below(n)); }

    bool next_bool() { return (next_u64() >> 63) != 0; }

    // Independent child stream. Keyed off the seed (not the current state), so
    // derivation is position-independent: rng.derive(i) is the same stream no
    // matter how much of rng was consumed first.
    Rng derive(std::uint64_t child) const { return Rng(mix(seed_, child)); }

    std::uint64_t seed() const { return seed_; }

private:
    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
        std::uint64_t z = a ^ 0x632be59bd9b4e019ULL;
        z += 0x9e3779b97f4a7c15ULL * (b + 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t state_;
};

} // namespace bcsat
