#pragma once

#include <cmath>
#include <cstdint>

namespace synclab::rng {

// Counter-based generator: each output is a SplitMix64 finalizer applied to
// key + counter * phi. Stateless apart from the counter, so substreams are
// cheap and trials can run on any schedule without sharing state.
inline constexpr std::uint64_t kPhi = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

// Purpose tags keep substreams disjoint: the stream key is a fixed mixing of
// (master seed, purpose tag, index). Tags are arbitrary distinct constants.
enum class Purpose : std::uint64_t {
    signal = 0x5349474eULL,          // planted phase vector
    noise_channel = 0x4e4f4953ULL,   // W_l, indexed by channel
    external_channel = 0x45585452ULL,// Z_l, indexed by channel
    trial = 0x5452494cULL,           // per-trial master for MC experiments
    start_vector = 0x53545254ULL,    // power-iteration start vectors
    mle = 0x4d4c4531ULL,
};

inline std::uint64_t derive_key(std::uint64_t master, Purpose purpose, std::uint64_t index) {
    std::uint64_t k = mix64(master + kPhi);
    k = mix64(k ^ mix64(static_cast<std::uint64_t>(purpose) + kPhi));
    return mix64(k ^ mix64(index + kPhi));
}

class Stream {
  public:
    explicit Stream(std::uint64_t key) : key_(key) {}
    Stream(std::uint64_t master, Purpose purpose, std::uint64_t index = 0)
        : key_(derive_key(master, purpose, index)) {}

    std::uint64_t next_u64() { return mix64(key_ + (++counter_) * kPhi); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Marsaglia polar method; the spare variate is cached.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    // N(0, 1/2), the per-component law of a complex standard Gaussian.
    double gaussian_half() { return gaussian() * 0.7071067811865476; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace synclab::rng
