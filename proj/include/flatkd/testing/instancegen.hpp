#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "flatkd/point.hpp"

namespace flatkd::testing {

// Deterministic random instances for the property suites. Beyond plain
// uniform points this deliberately produces duplicates, grid-snapped
// coordinates (lots of exact distance ties) and queries landing exactly on
// stored points or split planes, because those are where tie and boundary
// rules earn their keep.
class InstanceRng {
public:
    explicit InstanceRng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }
    int next_int(int lo, int hi); // inclusive bounds
    float next_float01() { return static_cast<float>(gen_() >> 40) * 0x1p-24f; }
    bool chance(double p) { return next_float01() < p; }

private:
    std::mt19937_64 gen_;
};

struct PointGenOptions {
    int grid = 0;             // snap coordinates to multiples of 1/grid when > 0
    double dup_fraction = 0.0; // fraction of points copied from earlier ones
};

PointSet random_point_set(InstanceRng& rng, int n, int dim, const PointGenOptions& options = {});

// Mixes plain uniform queries with copies of stored points and on-plane
// coordinate reuse.
std::vector<float> random_query(InstanceRng& rng, int dim, const PointSet& points);

} // namespace flatkd::testing
