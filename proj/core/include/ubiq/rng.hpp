#pragma once

#include <cstdint>
#include <string_view>

namespace ubiq {

// Counter-based splittable generator: every value is a pure function of
// (seed, stream tag, index), so enumeration order and task scheduling never
// change a sample.
namespace rng {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::uint64_t derive(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0) {
    return splitmix64(splitmix64(seed ^ fnv1a(tag)) ^ index);
}

}  // namespace rng

// Keyed counter stream; `uniform(i)` is the i-th variate of the stream.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    static CounterRng keyed(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0) {
        return CounterRng(rng::derive(seed, tag, index));
    }

    std::uint64_t bits(std::uint64_t index) const { return rng::splitmix64(key_ ^ (index * 0x9e3779b97f4a7c15ULL + 1)); }

    // uniform in [0,1), 53 random bits
    double uniform(std::uint64_t index) const {
        return static_cast<double>(bits(index) >> 11) * 0x1.0p-53;
    }

    CounterRng substream(std::string_view tag, std::uint64_t index = 0) const {
        return CounterRng(rng::derive(key_, tag, index));
    }

private:
    std::uint64_t key_;
};

// Sequential view over a counter stream for variable-draw algorithms
// (e.g. Poisson counts); still a pure function of the stream key.
class SeqRng {
public:
    explicit SeqRng(CounterRng base) : base_(base) {}
    double next() { return base_.uniform(cursor_++); }

private:
    CounterRng base_;
    std::uint64_t cursor_ = 0;
};

}  // namespace ubiq
