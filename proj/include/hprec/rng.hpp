// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace hprec {

/// Deterministic 64-bit generator (SplitMix64) with explicit sample
/// transforms.  Every random quantity in the library is drawn through this
/// class so that results are bit-identical across platforms and across
/// standard-library implementations; the C++ <random> distributions are
/// deliberately avoided because their output is implementation-defined.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    /// Next raw 64-bit word of the SplitMix64 recurrence.
    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30U)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27U)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31U);
    }

    /// Uniform double in [0, 1) with 53 random mantissa bits.
    double uniform() {
        return static_cast<double>(next_u64() >> 11U) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (explicit, platform-independent).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // u Є (0,1] avoids log(0).
        const double u = 1.0 - uniform();
        const double v = uniform();
        const double r = std::sqrt(-2.0 * std::log(u));
        const double a = 6.283185307179586476925286766559 * v;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Circularly-symmetric complex normal CN(0, 1).
    std::complex<double> cx_normal() {
        const double s = 0.70710678118654752440084436210485; // 1/sqrt(2)
        const double re = normal();
        const double im = normal();
        return {s * re, s * im};
    }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Mixes one 64-bit value through the SplitMix64 output function.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30U)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27U)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31U);
}

/// Derives an independent substream seed from (seed, a, b).  Used for
/// per-user/per-path channel streams and per-point/per-trial sweep streams;
/// substreams are decorrelated and independent of evaluation order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b) {
    std::uint64_t s = mix64(seed ^ 0xA0761D6478BD642FULL);
    s = mix64(s ^ mix64(a + 0x8BB84B93962EACC9ULL));
    s = mix64(s ^ mix64(b + 0x2D358DCCAA6C78A5ULL));
    return s;
}

} // namespace hprec
