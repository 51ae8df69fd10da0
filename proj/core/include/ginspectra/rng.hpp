#pragma once

#include <cstdint>
#include <random>

#include "ginspectra/types.hpp"

namespace ginspectra {

// SplitMix64 finalizer. Used to turn (master_seed, stream_index) into a
// well-mixed 64-bit seed so that consecutive stream indices give unrelated
// generator states.
constexpr std::uint64_t splitmix_mix(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t derive_stream_seed(std::uint64_t master_seed,
                                           std::uint64_t stream_index) {
    return splitmix_mix(master_seed ^ (stream_index * kGoldenGamma));
}

// One independent random stream, identified by (master_seed, stream_index).
// The ensemble harness gives realization i the stream with index i, so any
// single realization can be reproduced in isolation. Reproducibility contract
// is per-build: same binary, same seeds -> identical bits, regardless of how
// many worker threads consumed the streams.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
        : master_seed_(master_seed),
          stream_index_(stream_index),
          derived_seed_(derive_stream_seed(master_seed, stream_index)),
          gen_(derived_seed_) {}

    // Standard normal draw.
    double gauss() { return normal_(gen_); }

    // Complex draw with independent N(0,1) real and imaginary parts;
    // real part is drawn first.
    Complex gauss_complex() {
        const double re = gauss();
        const double im = gauss();
        return {re, im};
    }

    double uniform01() { return uniform_(gen_); }

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t stream_index() const { return stream_index_; }
    std::uint64_t derived_seed() const { return derived_seed_; }

private:
    std::uint64_t master_seed_;
    std::uint64_t stream_index_;
    std::uint64_t derived_seed_;
    std::mt19937_64 gen_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace ginspectra
