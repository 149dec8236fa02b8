#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace mbo {

/// Deterministic random stream identified by (master_seed, stream_id).
///
/// Two streams with the same identity produce bit-identical sequences;
/// distinct stream_ids are seeded through a splitmix64 chain so their
/// outputs are statistically independent. Floating-point draws are built
/// directly from raw 64-bit engine output, so sequences do not depend on
/// the standard library's distribution implementations.
class RngStream {
public:
    explicit RngStream(std::uint64_t master_seed, std::uint64_t stream_id = 0)
        : master_seed_(master_seed), stream_id_(stream_id) {
        std::uint64_t state = master_seed ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1));
        std::uint64_t words[8];
        for (auto& w : words) w = splitmix64(state);
        std::seed_seq seq(std::begin(words), std::end(words));
        engine_.seed(seq);
    }

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform draw in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [lo, hi] inclusive.
    int uniform_int(int lo, int hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(next_u64() % span);
    }

    /// Standard normal via Box-Muller (uses two uniforms per draw).
    double normal() {
        const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    /// Derive an independent child stream from the current state.
    /// Advances this stream; successive spawns yield distinct children.
    RngStream spawn() {
        const std::uint64_t seed = next_u64();
        const std::uint64_t id = next_u64();
        return RngStream(seed, id);
    }

private:
    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t master_seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
};

}  // namespace mbo
