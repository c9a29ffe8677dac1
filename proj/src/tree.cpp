#include "flatkd/tree.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace flatkd {

int left_subtree_size(int n) {
    if (n < 1) throw std::invalid_argument("left_subtree_size: n must be >= 1");
    if (n == 1) return 0;
    const int h = std::bit_width(static_cast<unsigned>(n)) - 1; // floor(log2 n)
    const int full = (1 << h) - 1;                              // nodes above the last level
    const int last = n - full;                                  // occupancy of the last level
    const int half = 1 << (h - 1);                              // last-level capacity of the left subtree
    return (half - 1) + std::min(last, half);
}

int split_dim_of(const KdTree& tree, int node) {
    if (node < 0 || node >= tree.size())
        throw std::invalid_argument("split_dim_of: node index out of range");
    return tree.split_dim(node);
}

namespace {

void check_policy_dims(const SplitPolicy& policy, int n, int dim) {
    if (policy.round_robin()) return;
    for (int i = 0; i < n; ++i) {
        const int d = policy.custom(i);
        if (d < 0 || d >= dim)
            throw DataError("split policy returned dimension " + std::to_string(d) +
                            " for node " + std::to_string(i));
    }
}

// Strict total order on (coords[d], full coordinate tuple, original index).
// Makes the rank selection, and therefore the whole build, deterministic.
struct RankOrder {
    const PointSet& pts;
    int d;

    bool operator()(int a, int b) const {
        const auto pa = pts[a];
        const auto pb = pts[b];
        const std::size_t sd = static_cast<std::size_t>(d);
        if (pa[sd] != pb[sd]) return pa[sd] < pb[sd];
        for (std::size_t i = 0; i < pa.size(); ++i)
            if (pa[i] != pb[i]) return pa[i] < pb[i];
        return a < b;
    }
};

void build_range(const PointSet& pts, std::span<int> order, int slot,
                 const SplitPolicy& policy, std::vector<float>& out) {
    const int n = static_cast<int>(order.size());
    if (n == 0) return;
    const int dim = pts.dim();
    const int d = policy.round_robin() ? round_robin_split_dim(slot, dim) : policy.custom(slot);
    const int rank = left_subtree_size(n);
    std::nth_element(order.begin(), order.begin() + rank, order.end(), RankOrder{pts, d});
    const auto p = pts[order[static_cast<std::size_t>(rank)]];
    std::copy(p.begin(), p.end(), out.begin() + static_cast<std::size_t>(slot) * dim);
    build_range(pts, order.first(rank), 2 * slot + 1, policy, out);
    build_range(pts, order.subspan(static_cast<std::size_t>(rank) + 1), 2 * slot + 2, policy, out);
}

} // namespace

KdTree KdTree::from_level_order(PointSet nodes, SplitPolicy policy) {
    require_finite(nodes, "tree nodes");
    check_policy_dims(policy, nodes.size(), nodes.dim());
    KdTree t;
    t.nodes_ = std::move(nodes);
    t.policy_ = std::move(policy);
    return t;
}

KdTree build_tree(const PointSet& points, SplitPolicy policy) {
    require_finite(points, "build");
    const int n = points.size();
    check_policy_dims(policy, n, points.dim());
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::vector<float> nodes(static_cast<std::size_t>(n) * points.dim());
    build_range(points, order, 0, policy, nodes);
    return KdTree::from_level_order(PointSet(points.dim(), std::move(nodes)), std::move(policy));
}

std::string TreeViolation::describe() const {
    if (kind == Kind::points) return "tree points differ from input: " + detail;
    return "ordering violated at node " + std::to_string(node) + " (dim " + std::to_string(dim) +
           "): descendant " + std::to_string(descendant) + " " + detail;
}

namespace {

// Scans the whole subtree under `child` for coordinates on the wrong side of
// the plane. `want_leq` selects which side the subtree is.
std::optional<TreeViolation> scan_subtree(const KdTree& tree, int node, int d, float split,
                                          int child, bool want_leq) {
    std::vector<int> stack;
    if (child < tree.size()) stack.push_back(child);
    while (!stack.empty()) {
        const int i = stack.back();
        stack.pop_back();
        const float c = tree.coord(i, d);
        const bool ok = want_leq ? (c <= split) : (c >= split);
        if (!ok) {
            TreeViolation v;
            v.kind = TreeViolation::Kind::ordering;
            v.node = node;
            v.dim = d;
            v.descendant = i;
            v.detail = "has coords[" + std::to_string(d) + "]=" + std::to_string(c) +
                       (want_leq ? " > " : " < ") + std::to_string(split);
            return v;
        }
        if (left_child_of(i) < tree.size()) stack.push_back(left_child_of(i));
        if (right_child_of(i) < tree.size()) stack.push_back(right_child_of(i));
    }
    return std::nullopt;
}

} // namespace

std::optional<TreeViolation> verify_tree(const KdTree& tree) {
    for (int n = 0; n < tree.size(); ++n) {
        const int d = tree.split_dim(n);
        const float split = tree.coord(n, d);
        if (auto v = scan_subtree(tree, n, d, split, left_child_of(n), true)) return v;
        if (auto v = scan_subtree(tree, n, d, split, right_child_of(n), false)) return v;
    }
    return std::nullopt;
}

std::optional<TreeViolation> verify_tree(const KdTree& tree, const PointSet& original) {
    if (auto v = verify_tree(tree)) return v;
    TreeViolation mism;
    mism.kind = TreeViolation::Kind::points;
    if (tree.dim() != original.dim() || tree.size() != original.size()) {
        mism.detail = "size or dimension mismatch";
        return mism;
    }
    auto sorted_rows = [](const PointSet& pts) {
        std::vector<int> idx(static_cast<std::size_t>(pts.size()));
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](int a, int b) {
            const auto pa = pts[a];
            const auto pb = pts[b];
            return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
        });
        return idx;
    };
    const auto ta = sorted_rows(tree.nodes());
    const auto tb = sorted_rows(original);
    for (std::size_t i = 0; i < ta.size(); ++i) {
        const auto pa = tree.nodes()[ta[i]];
        const auto pb = original[tb[i]];
        if (!std::equal(pa.begin(), pa.end(), pb.begin())) {
            mism.detail = "multiset mismatch at sorted position " + std::to_string(i);
            return mism;
        }
    }
    return std::nullopt;
}

} // namespace flatkd
