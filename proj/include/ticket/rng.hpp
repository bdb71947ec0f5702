#pragma once

#include <cstdint>
#include <vector>

namespace ticket {

inline constexpr std::uint64_t kSeedIncrement = 0x9E3779B97F4A7C15ull;

// Finalizer from the splitmix64 generator (Steele, Lea, Flood).
inline std::uint64_t mix64(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Derives an independent child seed from (seed, stream). Distinct streams
// give pairwise-distinct outputs because mix64 is a bijection.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return mix64(seed + (stream + 1) * kSeedIncrement);
}

// Self-contained deterministic generator. The standard <random> engines
// and distributions are implementation-defined across library versions,
// which would break byte-identical artifacts; this one is fixed forever.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += kSeedIncrement;
        return mix64(state_);
    }

    // Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t cutoff = n * (UINT64_MAX / n);
        std::uint64_t r = next();
        while (r >= cutoff) r = next();
        return r % n;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::uint64_t state_;
};

}  // namespace ticket
