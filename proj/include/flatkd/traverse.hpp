#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "flatkd/tree.hpp"

namespace flatkd {

// Stack-free k-d tree queries.
//
// The walk keeps two node ids (the current node and the previously visited
// one) plus the shrinking search radius, and derives every move from their
// relation:
//
//   arrived from the parent   -> process the point, then step into the child
//                                on the query's side of the split plane;
//   back from the close child -> step into the far child if the plane is
//                                still within the search radius, else climb;
//   back from the far child   -> climb to the parent.
//
// Child slots >= N bounce straight back to their parent. The walk ends when
// the root tries to step to its parent (-1). Each node is processed exactly
// once, on its first visit, before anything in its subtrees.
//
// traverse_recursive is the plainly recursive twin. It visits the same nodes
// in the same order and is kept as the reference implementation for tests
// and benchmark comparisons.

inline constexpr float kInfRadius = std::numeric_limits<float>::infinity();

// The entire per-query state of the stack-free walk.
struct TraversalState {
    std::int32_t curr = 0;
    std::int32_t prev = -1;
    float radius2 = kInfRadius;
};

static_assert(sizeof(TraversalState) == 2 * sizeof(std::int32_t) + sizeof(float),
              "traversal state is two node ids plus the squared radius");

struct QueryStats {
    long long steps = 0;           // loop iterations (incl. bounces off empty slots)
    long long nodes_visited = 0;   // iterations standing on a valid node
    long long nodes_processed = 0; // first visits, i.e. candidate evaluations

    // The walk tracks exactly two node ids; everything else is the radius
    // and the candidate set.
    static constexpr int state_node_ids = 2;
};

struct TraceEvent {
    enum class Kind : std::uint8_t { processed, bounced };

    Kind kind = Kind::processed;
    std::int32_t node = -1;

    bool operator==(const TraceEvent&) const = default;
};

using Trace = std::vector<TraceEvent>;

// Debug form: one "P <idx>" or "B <idx>" line per event.
std::string trace_to_text(const Trace& trace);

struct Hit {
    std::int32_t node = -1;
    float dist2 = kInfRadius;

    float distance() const { return std::sqrt(dist2); }
    bool operator==(const Hit&) const = default;
};

// Shared result order: ascending squared distance, ties to the smaller node
// index. Both the queries and the brute-force oracle rank hits with this.
inline bool hit_order(const Hit& a, const Hit& b) {
    if (a.dist2 != b.dist2) return a.dist2 < b.dist2;
    return a.node < b.node;
}

// Single-best accumulator for find-closest-point.
class FcpCandidates {
public:
    explicit FcpCandidates(float max_radius = kInfRadius)
        : cap2_(squared_radius_cap(max_radius)) {}

    void consider(float d2, std::int32_t node) {
        if (d2 > cap2_) return; // admission is inclusive at the cap
        if (d2 < best_.dist2 || (d2 == best_.dist2 && (best_.node < 0 || node < best_.node)))
            best_ = Hit{node, d2};
    }

    float radius2() const { return best_.node < 0 ? cap2_ : best_.dist2; }

    std::optional<Hit> best() const {
        return best_.node < 0 ? std::nullopt : std::optional<Hit>(best_);
    }

    void reset() { best_ = Hit{}; }

private:
    float cap2_;
    Hit best_{};
};

// Bounded max-heap of the k best candidates. The heap top is the current
// worst kept hit; it supplies the shrinking radius once the heap is full,
// before that the radius stays at the initial bound.
class KnnCandidates {
public:
    explicit KnnCandidates(int k, float max_radius = kInfRadius)
        : k_(k), cap2_(squared_radius_cap(max_radius)) {
        if (k < 1) throw std::invalid_argument("knn: k must be >= 1");
        heap_.reserve(static_cast<std::size_t>(std::min(k, 1024)));
    }

    void consider(float d2, std::int32_t node) {
        if (d2 > cap2_) return;
        if (static_cast<int>(heap_.size()) < k_) {
            heap_.push_back(Hit{node, d2});
            sift_up(static_cast<int>(heap_.size()) - 1);
            return;
        }
        const Hit& worst = heap_.front();
        if (d2 < worst.dist2 || (d2 == worst.dist2 && node < worst.node)) {
            heap_.front() = Hit{node, d2};
            sift_down(0);
        }
    }

    float radius2() const {
        return static_cast<int>(heap_.size()) < k_ ? cap2_ : heap_.front().dist2;
    }

    int count() const { return static_cast<int>(heap_.size()); }
    int k() const { return k_; }

    // Copies the kept hits into `out` in ascending (dist2, node) order.
    // Returns the number written; out must hold at least count() entries.
    int extract_sorted(std::span<Hit> out) const;

    void reset() { heap_.clear(); }

private:
    void sift_up(int i) {
        while (i > 0) {
            const int p = (i - 1) / 2;
            if (!hit_order(heap_[p], heap_[i])) break;
            std::swap(heap_[p], heap_[i]);
            i = p;
        }
    }

    void sift_down(int i) {
        const int n = static_cast<int>(heap_.size());
        while (true) {
            int m = i;
            const int l = 2 * i + 1;
            const int r = 2 * i + 2;
            if (l < n && hit_order(heap_[m], heap_[l])) m = l;
            if (r < n && hit_order(heap_[m], heap_[r])) m = r;
            if (m == i) return;
            std::swap(heap_[i], heap_[m]);
            i = m;
        }
    }

    int k_;
    float cap2_;
    std::vector<Hit> heap_;
};

template <typename C>
concept CandidateSink = requires(C& c, float d2, std::int32_t n) {
    c.consider(d2, n);
    { static_cast<const C&>(c).radius2() } -> std::convertible_to<float>;
};

namespace detail {

// Queries on an empty tree return empty immediately, so nothing is checked.
inline void validate_query(const KdTree& tree, std::span<const float> query) {
    if (tree.size() == 0) return;
    if (static_cast<int>(query.size()) != tree.dim())
        throw DataError("query dimension " + std::to_string(query.size()) +
                        " does not match tree dimension " + std::to_string(tree.dim()));
    if (!all_finite(query)) throw DataError("query has a non-finite coordinate");
}

} // namespace detail

// One transition of the state machine. Returns false once the walk has
// terminated (and leaves curr at -1); otherwise performs exactly one step.
template <CandidateSink C>
bool traverse_step(const KdTree& tree, std::span<const float> query, TraversalState& st,
                   C& cand, QueryStats* stats = nullptr, Trace* trace = nullptr) {
    const int n = tree.size();
    if (st.curr < 0 || n == 0) return false;

    if (stats) ++stats->steps;
    const std::int32_t parent = (st.curr + 1) / 2 - 1;
    if (st.curr >= n) {
        // nonexistent child slot: bounce straight back
        if (trace) trace->push_back({TraceEvent::Kind::bounced, st.curr});
        st.prev = st.curr;
        st.curr = parent;
        return true;
    }

    // level order puts every parent before its children, so the comparison
    // tells first visits apart from returns out of a subtree
    const bool from_parent = st.prev < st.curr;
    if (from_parent) {
        if (stats) ++stats->nodes_processed;
        if (trace) trace->push_back({TraceEvent::Kind::processed, st.curr});
        cand.consider(squared_distance(query, tree.point(st.curr)), st.curr);
        st.radius2 = cand.radius2();
    }
    if (stats) ++stats->nodes_visited;

    const int d = tree.split_dim(st.curr);
    const float signed_dist = query[static_cast<std::size_t>(d)] - tree.coord(st.curr, d);
    const std::int32_t close_side = signed_dist > 0.0f;
    const std::int32_t close_child = 2 * st.curr + 1 + close_side;
    const std::int32_t far_child = 2 * st.curr + 2 - close_side;
    const bool far_in_range = signed_dist * signed_dist <= st.radius2; // inclusive

    std::int32_t next;
    if (from_parent)
        next = close_child;
    else if (st.prev == close_child)
        next = far_in_range ? far_child : parent;
    else
        next = parent;

    if (next == -1) {
        // only the root steps to -1: the whole tree is done
        st.curr = -1;
        return false;
    }
    st.prev = st.curr;
    st.curr = next;
    return true;
}

template <CandidateSink C>
void traverse_stack_free(const KdTree& tree, std::span<const float> query, C& cand,
                         QueryStats* stats = nullptr, Trace* trace = nullptr) {
    detail::validate_query(tree, query);
    TraversalState st;
    st.radius2 = cand.radius2();
    while (traverse_step(tree, query, st, cand, stats, trace)) {
    }
}

namespace detail {

template <CandidateSink C>
void recursive_visit(const KdTree& tree, std::span<const float> query, C& cand,
                     QueryStats* stats, Trace* trace, int node) {
    if (stats) ++stats->steps;
    if (node >= tree.size()) {
        if (trace) trace->push_back({TraceEvent::Kind::bounced, node});
        return;
    }
    if (stats) {
        ++stats->nodes_visited;
        ++stats->nodes_processed;
    }
    if (trace) trace->push_back({TraceEvent::Kind::processed, node});
    cand.consider(squared_distance(query, tree.point(node)), node);

    const int d = tree.split_dim(node);
    const float signed_dist = query[static_cast<std::size_t>(d)] - tree.coord(node, d);
    const int close_side = signed_dist > 0.0f;
    recursive_visit(tree, query, cand, stats, trace, 2 * node + 1 + close_side);
    if (signed_dist * signed_dist <= cand.radius2())
        recursive_visit(tree, query, cand, stats, trace, 2 * node + 2 - close_side);
}

} // namespace detail

template <CandidateSink C>
void traverse_recursive(const KdTree& tree, std::span<const float> query, C& cand,
                        QueryStats* stats = nullptr, Trace* trace = nullptr) {
    detail::validate_query(tree, query);
    if (tree.size() == 0) return;
    detail::recursive_visit(tree, query, cand, stats, trace, 0);
}

// Closest stored point within max_radius (inclusive), or nothing.
// Equal distances resolve to the smaller node index.
std::optional<Hit> fcp(const KdTree& tree, std::span<const float> query,
                       float max_radius = kInfRadius, QueryStats* stats = nullptr,
                       Trace* trace = nullptr);

// Up to k nearest points within max_radius (inclusive), ascending by
// (distance, node index). k past the number of stored points just returns
// fewer hits.
std::vector<Hit> knn(const KdTree& tree, std::span<const float> query, int k,
                     float max_radius = kInfRadius, QueryStats* stats = nullptr,
                     Trace* trace = nullptr);

} // namespace flatkd
