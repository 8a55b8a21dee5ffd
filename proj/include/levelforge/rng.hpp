#pragma once

#include <cstdint>

namespace levelforge {

/// Stateless counter-based generator: every draw is a pure function of
/// (seed, stream, counter), so sampling order never changes the result.
/// Only integer arithmetic and basic floating-point operations are used,
/// which keeps the output identical across platforms.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    [[nodiscard]] std::uint64_t bits(std::uint64_t counter, std::uint64_t sub = 0) const;
    /// Uniform on [0, 1) with 53 random bits.
    [[nodiscard]] double uniform(std::uint64_t counter, std::uint64_t sub = 0) const;
    /// Standard normal via the polar method.
    [[nodiscard]] double normal(std::uint64_t counter) const;

private:
    std::uint64_t key_;
};

/// Natural log and exp built from frexp/ldexp and series, bit-reproducible
/// without relying on libm.
[[nodiscard]] double portable_log(double x);
[[nodiscard]] double portable_exp(double x);

}  // namespace levelforge
