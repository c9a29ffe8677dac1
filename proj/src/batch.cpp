#include "flatkd/batch.hpp"

#include <bit>
#include <ostream>

#include "flatkd/io.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace flatkd {

const char* to_string(Engine e) {
    return e == Engine::stack_free ? "stackfree" : "recursive";
}

const char* to_string(QueryKind k) {
    return k == QueryKind::fcp ? "fcp" : "knn";
}

int hardware_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

std::uint64_t BatchResult::result_hash() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](std::uint32_t v) {
        for (int i = 0; i < 4; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 0x100000001b3ull;
        }
    };
    for (std::size_t q = 0; q < counts.size(); ++q) {
        const std::int32_t c = counts[q];
        mix(static_cast<std::uint32_t>(c));
        for (std::int32_t j = 0; j < c; ++j) {
            const Hit& hit = hits[q * static_cast<std::size_t>(stride) + static_cast<std::size_t>(j)];
            mix(static_cast<std::uint32_t>(hit.node));
            mix(std::bit_cast<std::uint32_t>(hit.dist2));
        }
    }
    return h;
}

namespace {

struct Scratch {
    FcpCandidates fcp_cand;
    KnnCandidates knn_cand;

    Scratch(const BatchOptions& o)
        : fcp_cand(o.max_radius), knn_cand(o.kind == QueryKind::knn ? o.k : 1, o.max_radius) {}
};

template <CandidateSink C>
void run_one(const KdTree& tree, std::span<const float> q, C& cand, Engine engine,
             QueryStats* stats) {
    if (engine == Engine::stack_free)
        traverse_stack_free(tree, q, cand, stats);
    else
        traverse_recursive(tree, q, cand, stats);
}

} // namespace

BatchResult run_batch(const KdTree& tree, const PointSet& queries, const BatchOptions& options) {
    if (options.kind == QueryKind::knn && options.k < 1)
        throw std::invalid_argument("knn: k must be >= 1");
    squared_radius_cap(options.max_radius); // reject NaN / negative up front
    if (tree.size() > 0 && queries.size() > 0) {
        if (queries.dim() != tree.dim())
            throw DataError("query dimension " + std::to_string(queries.dim()) +
                            " does not match tree dimension " + std::to_string(tree.dim()));
        require_finite(queries, "queries");
    }

    const int m = queries.size();
    BatchResult res;
    res.stride = options.kind == QueryKind::knn ? options.k : 1;
    res.counts.assign(static_cast<std::size_t>(m), 0);
    res.hits.assign(static_cast<std::size_t>(m) * res.stride, Hit{});

    const int threads = options.threads > 0 ? options.threads : hardware_threads();
#ifndef _OPENMP
    (void)threads;
#endif

#ifdef _OPENMP
#pragma omp parallel num_threads(threads)
#endif
    {
        Scratch scratch(options);
        QueryStats local;
        QueryStats* stats = options.collect_stats ? &local : nullptr;

#ifdef _OPENMP
#pragma omp for schedule(dynamic, 256)
#endif
        for (int i = 0; i < m; ++i) {
            const auto q = queries[i];
            Hit* slot = res.hits.data() + static_cast<std::size_t>(i) * res.stride;
            if (options.kind == QueryKind::fcp) {
                scratch.fcp_cand.reset();
                run_one(tree, q, scratch.fcp_cand, options.engine, stats);
                if (auto best = scratch.fcp_cand.best()) {
                    *slot = *best;
                    res.counts[static_cast<std::size_t>(i)] = 1;
                }
            } else {
                scratch.knn_cand.reset();
                run_one(tree, q, scratch.knn_cand, options.engine, stats);
                res.counts[static_cast<std::size_t>(i)] =
                    scratch.knn_cand.extract_sorted({slot, static_cast<std::size_t>(res.stride)});
            }
        }

        if (options.collect_stats) {
#ifdef _OPENMP
#pragma omp critical(flatkd_stats_merge)
#endif
            {
                res.stats.steps += local.steps;
                res.stats.nodes_visited += local.nodes_visited;
                res.stats.nodes_processed += local.nodes_processed;
            }
        }
    }
    return res;
}

void write_query_results(std::ostream& out, const BatchResult& result) {
    std::string line;
    for (std::size_t q = 0; q < result.counts.size(); ++q) {
        line.clear();
        const auto hits = result.hits_for(static_cast<int>(q));
        if (result.stride == 1) {
            if (hits.empty())
                line = "-1,inf";
            else
                line = std::to_string(hits[0].node) + ',' + io::format_float(hits[0].distance());
        } else {
            line = std::to_string(hits.size());
            for (const Hit& h : hits) {
                line += ',';
                line += std::to_string(h.node);
                line += ',';
                line += io::format_float(h.distance());
            }
        }
        line += '\n';
        out << line;
    }
}

} // namespace flatkd
