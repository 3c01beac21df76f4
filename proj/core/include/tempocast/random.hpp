#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace tempocast {

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

/// Seeded random source. All stochastic behavior in the library flows through
/// one of these, so a fixed seed reproduces runs bit-for-bit.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : seed_(seed), gen_(seed) {}

    std::uint64_t seed() const { return seed_; }
    std::mt19937_64& engine() { return gen_; }

    double uniform(double lo, double hi) {
        std::uniform_real_distribution<double> dist(lo, hi);
        return dist(gen_);
    }

    double normal(double mean, double stddev) {
        std::normal_distribution<double> dist(mean, stddev);
        return dist(gen_);
    }

    std::uint64_t next_u64() { return gen_(); }

    /// Independent child stream addressed by label; stable across runs.
    Rng derive(std::string_view label) const {
        return Rng(seed_ * 0x9E3779B97F4A7C15ull + fnv1a64(label));
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        std::shuffle(v.begin(), v.end(), gen_);
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
};

/// Glorot-uniform draws for a dense map with the given fan-in/out.
inline std::vector<double> glorot_uniform(Rng& rng, int fan_in, int fan_out, std::size_t count) {
    double limit = std::sqrt(6.0 / (static_cast<double>(fan_in) + static_cast<double>(fan_out)));
    std::vector<double> out(count);
    for (auto& v : out) v = rng.uniform(-limit, limit);
    return out;
}

}  // namespace tempocast
