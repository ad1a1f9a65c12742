#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace f2n {

/// Seeded generator with hand-rolled distributions so that draws are
/// bit-identical across standard library implementations (std:: distribution
/// objects are not). fork() derives independent substreams by name without
/// disturbing this stream.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    /// Standard normal via Box-Muller (two uniforms per draw, no cached spare).
    double normal();
    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    /// Weighted index choice; weights need not be normalized.
    std::size_t choice(const std::vector<double>& weights);

    /// Independent substream identified by (this stream's seed, tag).
    Rng fork(std::string_view tag) const;
    Rng fork(std::uint64_t tag) const;

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace f2n
