#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>
#include <vector>

namespace anchscgan {

// Every stage derives its generator from the one user-facing root seed, so
// changing an unrelated stage never perturbs another stage's draws.
enum class SeedStream : std::uint64_t {
    split = 1,
    anchors = 2,
    prior = 3,
    clusters = 4,
    gan = 5,
    oversample = 6,
    baseline = 7,
    benchmark = 8,
    toy = 9,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t root, std::uint64_t stream) {
    return splitmix64(splitmix64(root) ^ splitmix64(stream * 0x9E3779B97F4A7C15ULL + 1));
}

inline std::uint64_t mix_seed(std::uint64_t root, SeedStream stream) {
    return mix_seed(root, static_cast<std::uint64_t>(stream));
}

inline std::mt19937_64 make_rng(std::uint64_t root, SeedStream stream) {
    return std::mt19937_64(mix_seed(root, stream));
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
    return std::mt19937_64(splitmix64(seed));
}

// First `take` entries of a seeded Fisher-Yates shuffle of 0..n-1; a draw
// without replacement when take < n.
template <typename Rng>
std::vector<Eigen::Index> shuffled_indices(Eigen::Index n, Rng& rng,
                                           Eigen::Index take = -1) {
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    if (take < 0 || take > n) take = n;
    for (Eigen::Index i = 0; i < take; ++i) {
        std::uniform_int_distribution<Eigen::Index> pick(i, n - 1);
        std::swap(idx[static_cast<std::size_t>(i)],
                  idx[static_cast<std::size_t>(pick(rng))]);
    }
    idx.resize(static_cast<std::size_t>(take));
    return idx;
}

}  // namespace anchscgan
