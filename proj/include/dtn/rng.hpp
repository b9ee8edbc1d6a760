#pragma once

#include <cstdint>
#include <random>

namespace dtn {

// splitmix64 finalizer; used to derive independent stream seeds.
inline uint64_t mix_seed(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic random stream. mt19937_64 output is fixed by the standard and
// all distribution helpers are hand-rolled, so sequences are identical across
// standard-library implementations.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    // Independent stream for (seed, stream id), e.g. one per host.
    static Rng substream(uint64_t seed, uint64_t stream) {
        return Rng(mix_seed(mix_seed(seed) ^ mix_seed(stream + 0x51ed2701ULL)));
    }

    uint64_t next_u64() { return gen_(); }

    // uniform in [0, 1)
    double uniform01() { return (next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // uniform index in [0, n); n > 0
    size_t uniform_index(size_t n) { return static_cast<size_t>(next_u64() % n); }

    // uniform integer in [lo, hi] inclusive
    int64_t uniform_int(int64_t lo, int64_t hi) {
        return lo + static_cast<int64_t>(uniform_index(static_cast<size_t>(hi - lo + 1)));
    }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 gen_;
};

} // namespace dtn
