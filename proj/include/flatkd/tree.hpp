#pragma once

#include <bit>
#include <functional>
#include <optional>
#include <string>

#include "flatkd/point.hpp"

namespace flatkd {

// Left-balanced complete layout, stored in level order: the root is slot 0,
// the children of slot n are 2n+1 and 2n+2, the parent is (n+1)/2-1, and
// every slot in [0,N) is occupied. No topology is stored anywhere.

inline int parent_of(int n) { return (n + 1) / 2 - 1; }
inline int left_child_of(int n) { return 2 * n + 1; }
inline int right_child_of(int n) { return 2 * n + 2; }

inline int depth_of(int n) {
    return std::bit_width(static_cast<unsigned>(n) + 1u) - 1;
}

// Number of nodes in the left subtree of a dense level-order tree of n nodes.
int left_subtree_size(int n);

inline int round_robin_split_dim(int node, int dim) {
    return depth_of(node) % dim;
}

// Split dimension assignment. The default cycles through the dimensions by
// depth. Any pure function of the node index may be plugged in instead; it
// must be the same function at build time and at query time. Persisted tree
// files always imply the round-robin default.
struct SplitPolicy {
    std::function<int(int)> custom;

    bool round_robin() const { return !custom; }
};

class KdTree {
public:
    KdTree() = default;

    // Adopts an existing level-order node array without reordering it.
    static KdTree from_level_order(PointSet nodes, SplitPolicy policy = {});

    int size() const { return nodes_.size(); }
    int dim() const { return nodes_.dim(); }
    bool empty() const { return nodes_.size() == 0; }

    std::span<const float> point(int n) const { return nodes_[n]; }
    float coord(int n, int d) const { return nodes_[n][static_cast<std::size_t>(d)]; }

    int split_dim(int n) const {
        return policy_.custom ? policy_.custom(n) : round_robin_split_dim(n, nodes_.dim());
    }

    const SplitPolicy& split_policy() const { return policy_; }
    const PointSet& nodes() const { return nodes_; }

private:
    PointSet nodes_;
    SplitPolicy policy_;
};

// Range-checked split dimension of one node.
int split_dim_of(const KdTree& tree, int node);

// Builds the unique left-balanced complete k-d tree over the given points.
// Each range places its rank-left_subtree_size element (ordered by the slot's
// split coordinate, ties by full coordinate tuple, then by original input
// index) and recurses. Deterministic for a fixed input order.
KdTree build_tree(const PointSet& points, SplitPolicy policy = {});

struct TreeViolation {
    enum class Kind { ordering, points };

    Kind kind = Kind::ordering;
    int node = -1;       // node whose split plane is violated
    int dim = -1;        // split dimension of that node
    int descendant = -1; // offending descendant slot
    std::string detail;

    std::string describe() const;
};

// Exhaustively scans every node's subtrees against its split plane.
// Reports the first violation; never throws because of tree content.
std::optional<TreeViolation> verify_tree(const KdTree& tree);

// Additionally checks that the stored points are a permutation of `original`.
std::optional<TreeViolation> verify_tree(const KdTree& tree, const PointSet& original);

} // namespace flatkd
