#pragma once

#include <cstdint>
#include <iosfwd>

#include "flatkd/traverse.hpp"

namespace flatkd {

enum class Engine { stack_free, recursive };
enum class QueryKind { fcp, knn };

const char* to_string(Engine e);
const char* to_string(QueryKind k);

struct BatchOptions {
    QueryKind kind = QueryKind::fcp;
    int k = 1;                       // knn only
    float max_radius = kInfRadius;
    Engine engine = Engine::stack_free;
    int threads = 0;                 // 0 = all available
    bool collect_stats = false;
};

// Results of one query batch. Every query owns a fixed-stride slot, so the
// buffers come out identical for any thread count.
struct BatchResult {
    int stride = 1;                 // hits per slot: 1 for fcp, k for knn
    std::vector<std::int32_t> counts;
    std::vector<Hit> hits;          // slot i = hits[i*stride .. i*stride+counts[i])
    QueryStats stats;               // aggregate over all queries when collected

    std::span<const Hit> hits_for(int query) const {
        return {hits.data() + static_cast<std::size_t>(query) * stride,
                static_cast<std::size_t>(counts[static_cast<std::size_t>(query)])};
    }

    // FNV-1a over counts and the valid hits; order-sensitive, so equal
    // hashes mean byte-equal result files.
    std::uint64_t result_hash() const;
};

int hardware_threads();

// Runs every query in `queries` against the shared tree, in parallel across
// the configured worker count. Results land in input order.
BatchResult run_batch(const KdTree& tree, const PointSet& queries, const BatchOptions& options);

// One record per query, matching the slot contents:
//   fcp: "node,distance" ("-1,inf" when nothing qualified)
//   knn: "count,node,distance,node,distance,..."
void write_query_results(std::ostream& out, const BatchResult& result);

} // namespace flatkd
