#include "flatkd/testing/instancegen.hpp"

#include <cmath>

namespace flatkd::testing {

int InstanceRng::next_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
}

PointSet random_point_set(InstanceRng& rng, int n, int dim, const PointGenOptions& options) {
    PointSet pts(dim);
    std::vector<float> p(static_cast<std::size_t>(dim));
    for (int i = 0; i < n; ++i) {
        if (i > 0 && rng.chance(options.dup_fraction)) {
            const int src = rng.next_int(0, i - 1);
            const auto row = pts[src];
            std::copy(row.begin(), row.end(), p.begin());
        } else {
            for (float& c : p) {
                c = rng.next_float01();
                if (options.grid > 0)
                    c = std::round(c * static_cast<float>(options.grid)) / static_cast<float>(options.grid);
            }
        }
        pts.append(p);
    }
    return pts;
}

std::vector<float> random_query(InstanceRng& rng, int dim, const PointSet& points) {
    std::vector<float> q(static_cast<std::size_t>(dim));
    for (float& c : q) c = rng.next_float01() * 1.5f - 0.25f;
    if (points.size() > 0) {
        if (rng.chance(0.10)) {
            // exact hit on a stored point
            const auto row = points[rng.next_int(0, points.size() - 1)];
            std::copy(row.begin(), row.end(), q.begin());
        } else if (rng.chance(0.15)) {
            // land exactly on some split plane coordinate
            const auto row = points[rng.next_int(0, points.size() - 1)];
            const int d = rng.next_int(0, dim - 1);
            q[static_cast<std::size_t>(d)] = row[static_cast<std::size_t>(d)];
        }
    }
    return q;
}

} // namespace flatkd::testing
