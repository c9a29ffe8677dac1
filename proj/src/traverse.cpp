#include "flatkd/traverse.hpp"

#include <algorithm>

namespace flatkd {

std::string trace_to_text(const Trace& trace) {
    std::string out;
    for (const TraceEvent& e : trace) {
        out += e.kind == TraceEvent::Kind::processed ? 'P' : 'B';
        out += ' ';
        out += std::to_string(e.node);
        out += '\n';
    }
    return out;
}

int KnnCandidates::extract_sorted(std::span<Hit> out) const {
    const int n = count();
    std::copy(heap_.begin(), heap_.end(), out.begin());
    std::sort(out.begin(), out.begin() + n, hit_order);
    return n;
}

std::optional<Hit> fcp(const KdTree& tree, std::span<const float> query, float max_radius,
                       QueryStats* stats, Trace* trace) {
    FcpCandidates cand(max_radius);
    traverse_stack_free(tree, query, cand, stats, trace);
    return cand.best();
}

std::vector<Hit> knn(const KdTree& tree, std::span<const float> query, int k, float max_radius,
                     QueryStats* stats, Trace* trace) {
    KnnCandidates cand(k, max_radius);
    traverse_stack_free(tree, query, cand, stats, trace);
    std::vector<Hit> out(static_cast<std::size_t>(cand.count()));
    cand.extract_sorted(out);
    return out;
}

} // namespace flatkd
