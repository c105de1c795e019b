#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace morphkit {

/// Deterministic random source. Wraps mt19937_64 with hand-rolled
/// distributions so that sampled sequences do not depend on the standard
/// library's (implementation-defined) distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t raw() { return gen_(); }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (pairs cached).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * M_PI * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    /// Uniform integer in [0, n).
    std::uint64_t integer(std::uint64_t n) {
        // modulo bias is irrelevant for n << 2^64 at desk scale
        return gen_() % n;
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace morphkit
