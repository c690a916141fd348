#include "spotsched/rng.hpp"

namespace spotsched {

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    engine_.seed(seq);
}

RandomStream RandomStream::derive(std::uint64_t seed, std::string_view name) {
    const std::uint64_t tag = fnv1a(name);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32)};
    RandomStream out(0);
    out.engine_.seed(seq);
    return out;
}

double RandomStream::uniform_open() {
    // (k + 0.5) / 2^53 for k in [0, 2^53) never hits 0 or 1.
    const std::uint64_t k = engine_() >> 11;
    return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

}  // namespace spotsched
