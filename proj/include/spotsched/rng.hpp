#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace spotsched {

/// Seeded 64-bit Mersenne Twister stream.
///
/// Every random quantity in an experiment flows from one 64-bit seed that is
/// split into named substreams ("jobs", "spots", "policy", "waits"), so that
/// changing how one consumer draws never shifts another consumer's sequence.
class RandomStream {
public:
    using engine_type = std::mt19937_64;

    explicit RandomStream(std::uint64_t seed);

    /// Independent substream identified by `name` under `seed`.
    static RandomStream derive(std::uint64_t seed, std::string_view name);

    /// Uniform draw on the open interval (0, 1), 53 bits of resolution.
    double uniform_open();

    engine_type& engine() noexcept { return engine_; }

private:
    engine_type engine_;
};

}  // namespace spotsched
