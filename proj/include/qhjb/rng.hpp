#pragma once

#include <cstdint>
#include <random>

namespace qhjb {

/// splitmix64 scramble; used to derive independent per-trajectory seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of trajectory `index` under a master seed. Streams depend only on
/// (master, index), never on execution order, so ensembles are reproducible
/// under any thread count.
inline std::uint64_t trajectory_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x51ed270b06f0c6a3ULL));
}

/// Stream of N(0,1) variates for one trajectory.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : rng_(seed) {}

    double operator()() { return normal_(rng_); }

private:
    std::mt19937_64 rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace qhjb
