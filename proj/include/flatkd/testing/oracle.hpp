#pragma once

#include <optional>
#include <vector>

#include "flatkd/traverse.hpp"

namespace flatkd::testing {

// Ground truth by exhaustive scan. Works on the flat point list only and
// never looks at tree topology, so it stays independent of the code under
// test. Hit indices refer to positions in that list (node slots, when the
// list is a tree's node array). Ties resolve exactly like the tree queries:
// ascending (squared distance, index).
class BruteForceIndex {
public:
    explicit BruteForceIndex(PointSet points) : points_(std::move(points)) {}

    const PointSet& points() const { return points_; }

    std::optional<Hit> fcp(std::span<const float> query, float max_radius = kInfRadius) const;
    std::vector<Hit> knn(std::span<const float> query, int k, float max_radius = kInfRadius) const;

private:
    void check_query(std::span<const float> query) const;

    PointSet points_;
};

// Explicit topology of the dense level-order tree of n nodes, derived by
// filling levels left to right rather than by index arithmetic. Used to
// cross-check left_subtree_size and the parent/child formulas.
struct ShapeNode {
    int parent = -1;
    int left = -1;
    int right = -1;
    int depth = 0;
};

std::vector<ShapeNode> enumerate_dense_shape(int n);

// All node ids in the subtree rooted at `root` (by table walk), root included.
std::vector<int> shape_subtree(const std::vector<ShapeNode>& shape, int root);

} // namespace flatkd::testing
