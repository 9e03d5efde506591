#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "flowsched/schedule.hpp"

namespace flowsched {

// splitmix64: tiny, seedable, identical across platforms. Outputs feed the
// perturbation generators, so file outputs stay byte-reproducible for a
// fixed seed.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in (0, 1)
    double next_uniform() {
        return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double next_in(double lo, double hi) { return lo + (hi - lo) * next_uniform(); }

private:
    std::uint64_t state_;
};

// Random monotone schedule: cumulative sums of positive lognormal increments
// over n_knots uniform time cells, normalized to run from 0 to 1. strength
// scales the log-increment spread.
Schedule random_monotone_schedule(SplitMix64& rng, int n_knots, double strength);

}  // namespace flowsched
