#include "flatkd/testing/oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace flatkd::testing {

void BruteForceIndex::check_query(std::span<const float> query) const {
    if (points_.size() == 0) return;
    if (static_cast<int>(query.size()) != points_.dim())
        throw DataError("oracle: query dimension mismatch");
    if (!all_finite(query)) throw DataError("oracle: non-finite query coordinate");
}

std::optional<Hit> BruteForceIndex::fcp(std::span<const float> query, float max_radius) const {
    check_query(query);
    const float cap2 = squared_radius_cap(max_radius);
    Hit best;
    for (int i = 0; i < points_.size(); ++i) {
        const float d2 = squared_distance(query, points_[i]);
        if (d2 > cap2) continue;
        if (d2 < best.dist2 || (d2 == best.dist2 && (best.node < 0 || i < best.node)))
            best = Hit{i, d2};
    }
    return best.node < 0 ? std::nullopt : std::optional<Hit>(best);
}

std::vector<Hit> BruteForceIndex::knn(std::span<const float> query, int k, float max_radius) const {
    if (k < 1) throw std::invalid_argument("oracle knn: k must be >= 1");
    check_query(query);
    const float cap2 = squared_radius_cap(max_radius);
    std::vector<Hit> admitted;
    for (int i = 0; i < points_.size(); ++i) {
        const float d2 = squared_distance(query, points_[i]);
        if (d2 <= cap2) admitted.push_back(Hit{i, d2});
    }
    if (static_cast<int>(admitted.size()) > k) {
        std::nth_element(admitted.begin(), admitted.begin() + k, admitted.end(), hit_order);
        admitted.resize(static_cast<std::size_t>(k));
    }
    std::sort(admitted.begin(), admitted.end(), hit_order);
    return admitted;
}

std::vector<ShapeNode> enumerate_dense_shape(int n) {
    if (n < 0) throw std::invalid_argument("enumerate_dense_shape: n must be >= 0");
    std::vector<ShapeNode> shape(static_cast<std::size_t>(n));
    if (n == 0) return shape;

    // level starts by filling left to right until the nodes run out
    std::vector<int> starts;
    int start = 0;
    int capacity = 1;
    while (start < n) {
        starts.push_back(start);
        for (int i = start; i < std::min(start + capacity, n); ++i)
            shape[static_cast<std::size_t>(i)].depth = static_cast<int>(starts.size()) - 1;
        start += capacity;
        capacity *= 2;
    }
    for (std::size_t level = 0; level + 1 < starts.size(); ++level) {
        const int begin = starts[level];
        const int end = std::min(starts[level + 1], n);
        for (int i = begin; i < end; ++i) {
            const int pos = i - begin;
            const int left = starts[level + 1] + 2 * pos;
            const int right = left + 1;
            if (left < n) {
                shape[static_cast<std::size_t>(i)].left = left;
                shape[static_cast<std::size_t>(left)].parent = i;
            }
            if (right < n) {
                shape[static_cast<std::size_t>(i)].right = right;
                shape[static_cast<std::size_t>(right)].parent = i;
            }
        }
    }
    return shape;
}

std::vector<int> shape_subtree(const std::vector<ShapeNode>& shape, int root) {
    std::vector<int> out;
    if (root < 0 || root >= static_cast<int>(shape.size())) return out;
    std::vector<int> stack{root};
    while (!stack.empty()) {
        const int i = stack.back();
        stack.pop_back();
        out.push_back(i);
        if (shape[static_cast<std::size_t>(i)].left >= 0) stack.push_back(shape[static_cast<std::size_t>(i)].left);
        if (shape[static_cast<std::size_t>(i)].right >= 0) stack.push_back(shape[static_cast<std::size_t>(i)].right);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace flatkd::testing
