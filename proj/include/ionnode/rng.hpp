// rng.hpp - counter-based random streams
//
// Every trial draws from its own SplitMix64 stream keyed by (seed, trial), so
// results do not depend on how trials are spread over worker threads.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace ionnode {

class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t trial) : state_(mix(seed ^ mix(trial + 0x632be59bd9b4e019ULL))) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    /// Uniform on (0, 1].
    double uniform() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

    double normal() {
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        return r * std::cos(2.0 * std::numbers::pi * uniform());
    }

    /// Number of Bernoulli(p) trials up to and including the first success.
    std::uint64_t geometric(double p) {
        if (p >= 1.0) return 1;
        const double k = std::floor(std::log(uniform()) / std::log1p(-p));
        return static_cast<std::uint64_t>(k) + 1;
    }

    bool bernoulli(double p) { return uniform() <= p; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace ionnode
