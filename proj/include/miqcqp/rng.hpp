#pragma once

#include <cstdint>
#include <random>

namespace miqcqp {

/// Portable seeded stream: std::mt19937_64 (its output sequence is fixed by the
/// standard) with hand-rolled transforms, since std:: distributions differ
/// between library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller; the second variate is cached.
    double normal();

    /// Uniform integer in [0, n), rejection sampled.
    std::uint64_t below(std::uint64_t n);

    bool coin() { return (next() >> 63) != 0; }

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

/// splitmix64 finalizer over (seed, stream); used to give parallel work items
/// independent, schedule-free seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace miqcqp
