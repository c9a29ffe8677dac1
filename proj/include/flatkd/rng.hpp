#pragma once

#include <cstdint>
#include <random>

#include "flatkd/point.hpp"

namespace flatkd {

// splitmix64, the usual 64-bit seed expander.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Stream-splitting rule: the seed for stream s is one splitmix64 step of
// (master ^ s * 0x9E3779B97F4A7C15). Stream 1 feeds data points, stream 2
// feeds query points, so datasets and query sets are reproducible from a
// single master seed on any platform.
inline constexpr std::uint64_t kDataStream = 1;
inline constexpr std::uint64_t kQueryStream = 2;

inline std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t x = master ^ (stream * 0x9E3779B97F4A7C15ull);
    return splitmix64(x);
}

// mt19937_64-backed uniform floats in [0,1). Takes the top 24 bits of each
// draw; both the generator sequence and the mapping are fully specified, so
// the emitted values are identical on every platform.
class UniformFloatSource {
public:
    explicit UniformFloatSource(std::uint64_t seed) : gen_(seed) {}

    float next() { return static_cast<float>(gen_() >> 40) * 0x1p-24f; }

    std::uint64_t next_u64() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

inline PointSet random_points(std::uint64_t seed, long long count, int dim) {
    if (count < 0) throw DataError("random points: negative count");
    if (dim < 1) throw DataError("random points: dimension must be >= 1");
    UniformFloatSource src(seed);
    std::vector<float> data(static_cast<std::size_t>(count) * dim);
    for (float& c : data) c = src.next();
    return PointSet(dim, std::move(data));
}

} // namespace flatkd
