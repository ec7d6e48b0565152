#include "cpcsim/rng.hpp"

namespace cpcsim {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng Rng::substream(std::uint64_t base_seed, std::uint64_t index) {
    return Rng(mix64(base_seed ^ mix64(index)));
}

}  // namespace cpcsim
