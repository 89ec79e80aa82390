#pragma once

#include <cstdint>
#include <string_view>

namespace tendeval {

/// Counter-based SplitMix64 stream.
///
/// key    = mix64(seed ^ fnv1a64(tag))
/// out(i) = mix64(key + (i + 1) * 0x9E3779B97F4A7C15)
///
/// where mix64 is the SplitMix64 finalizer. Each named stream is
/// independent of how many values other streams consumed, so corpora are
/// reproducible from (seed, tag) alone in any language.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::string_view tag);

    std::uint64_t next_u64();
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    /// Uniform integer in [0, bound), unbiased (rejection sampling).
    std::uint64_t below(std::uint64_t bound);
    bool bernoulli(double p) { return uniform() < p; }
    /// Standard normal via Box-Muller; consumes two outputs per draw.
    double normal();

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z);
std::uint64_t fnv1a64(std::string_view text);

} // namespace tendeval
