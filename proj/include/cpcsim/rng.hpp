#pragma once

#include <cstdint>
#include <random>

namespace cpcsim {

// Seedable deterministic uniform stream. Same seed, same stream.
// uniform() stays strictly inside (0,1) so inverse transforms never
// see log(0).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

    double uniform() {
        return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1p-53;
    }

    std::uint64_t next_u64() { return gen_(); }

    std::uint64_t seed() const { return seed_; }

    // Independent child stream for sweep point `index`.
    static Rng substream(std::uint64_t base_seed, std::uint64_t index);

private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
};

// splitmix64; used for sub-seed derivation. Stable across versions.
std::uint64_t mix64(std::uint64_t x);

}  // namespace cpcsim
