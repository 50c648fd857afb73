#pragma once

#include <cstdint>
#include <random>

namespace lsfts {

/// SplitMix64 step; the documented seed-splitting function. Independent
/// streams (per basis component, per Monte Carlo replicate, per draw block)
/// are seeded with split_seed(base, index) so that parallel and serial runs
/// produce identical output.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t split_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t s = base + 0x9e3779b97f4a7c15ULL * (index + 1);
    return splitmix64(s);
}

/// Standard normal sampler over a private mt19937_64 stream.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : engine_(seed) {}

    double operator()() { return dist_(engine_); }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> dist_{0.0, 1.0};
};

} // namespace lsfts
