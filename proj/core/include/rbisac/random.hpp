// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The rbisac Authors

#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace rbisac {

/// splitmix64 finalizer; used to decorrelate derived seeds.
std::uint64_t mix_seed(std::uint64_t x);

/// Seeded random stream with a platform-independent output sequence.
///
/// std::mt19937_64 is fully specified by the standard, but the standard
/// distributions are not, so uniform and Gaussian variates are generated here.
/// Streams are derived from a master seed plus a path of integer tags, so
/// every Monte Carlo trial or sweep point gets an independent, reproducible
/// stream regardless of the order in which workers pick them up.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    /// Child stream for (this stream's seed, tags...). Does not advance this stream.
    RandomStream derive(std::initializer_list<std::uint64_t> tags) const;

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform();

    /// Standard normal (Box-Muller, both variates used).
    double normal();
    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    std::complex<double> complex_normal(double variance);

    /// Unit-modulus phasor with uniform phase.
    std::complex<double> unit_phasor();

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace rbisac
