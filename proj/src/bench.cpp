#include "flatkd/bench.hpp"

#include <chrono>
#include <cstdio>
#include <ostream>

#include "flatkd/io.hpp"
#include "flatkd/rng.hpp"

namespace flatkd {

namespace {

void validate(const BenchConfig& cfg) {
    if (cfg.n_data < 0) throw DataError("bench: n must be >= 0");
    if (cfg.n_queries < 1) throw DataError("bench: m must be >= 1");
    if (cfg.k_dim < 1) throw DataError("bench: k-dim must be >= 1");
    if (cfg.reps < 1) throw DataError("bench: reps must be >= 1");
    if (cfg.kind == QueryKind::knn && cfg.k < 1) throw DataError("bench: k must be >= 1");
    if (!(cfg.max_radius > 0.0f)) throw DataError("bench: max radius must be > 0 or inf");
}

BenchRow run_cell(const KdTree& tree, const PointSet& queries, const BenchConfig& cfg) {
    BatchOptions opts;
    opts.kind = cfg.kind;
    opts.k = cfg.k;
    opts.max_radius = cfg.max_radius;
    opts.engine = cfg.engine;
    opts.threads = cfg.threads;

    BenchRow row;
    row.config = cfg;
    std::uint64_t hash = 0;
    double wall = 0.0;
    for (int rep = 0; rep < cfg.reps; ++rep) {
        const auto t0 = std::chrono::steady_clock::now();
        BatchResult res = run_batch(tree, queries, opts);
        const auto t1 = std::chrono::steady_clock::now();
        wall += std::chrono::duration<double>(t1 - t0).count();
        if (rep == 0) hash = res.result_hash();
    }
    opts.collect_stats = true;
    const BatchResult counted = run_batch(tree, queries, opts);

    row.total_queries = cfg.n_queries * cfg.reps;
    row.wall_time = wall;
    row.queries_per_second = wall > 0.0 ? static_cast<double>(row.total_queries) / wall : 0.0;
    const double m = static_cast<double>(cfg.n_queries);
    row.nodes_processed_per_query = static_cast<double>(counted.stats.nodes_processed) / m;
    row.steps_per_query = static_cast<double>(counted.stats.steps) / m;
    row.result_hash = hash;
    return row;
}

} // namespace

BenchRow run_bench(const BenchConfig& cfg) {
    validate(cfg);
    const PointSet data = random_points(derive_stream_seed(cfg.seed, kDataStream), cfg.n_data, cfg.k_dim);
    const KdTree tree = build_tree(data);
    const PointSet queries =
        random_points(derive_stream_seed(cfg.seed, kQueryStream), cfg.n_queries, cfg.k_dim);
    return run_cell(tree, queries, cfg);
}

std::vector<BenchRow> run_bench_matrix(const BenchConfig& base, std::span<const long long> n_list,
                                       std::span<const int> k_list,
                                       std::span<const float> maxr_list) {
    std::vector<BenchRow> rows;
    const PointSet queries =
        random_points(derive_stream_seed(base.seed, kQueryStream), base.n_queries, base.k_dim);
    for (const long long n : n_list) {
        BenchConfig cfg = base;
        cfg.n_data = n;
        validate(cfg);
        const PointSet data = random_points(derive_stream_seed(cfg.seed, kDataStream), n, cfg.k_dim);
        const KdTree tree = build_tree(data);
        if (cfg.kind == QueryKind::fcp) {
            rows.push_back(run_cell(tree, queries, cfg));
            continue;
        }
        for (const int k : k_list) {
            for (const float maxr : maxr_list) {
                cfg.k = k;
                cfg.max_radius = maxr;
                validate(cfg);
                rows.push_back(run_cell(tree, queries, cfg));
            }
        }
    }
    return rows;
}

namespace {

std::string maxr_text(float v) {
    return v == kInfRadius ? "inf" : io::format_float(v);
}

} // namespace

void print_bench_table(std::ostream& out, std::span<const BenchRow> rows) {
    char line[256];
    std::snprintf(line, sizeof(line), "%10s %5s %4s %8s %10s %4s %5s %14s %12s %16s\n", "n", "query",
                  "k", "maxR", "engine", "thr", "reps", "q/s", "nodes/query", "result-hash");
    out << line;
    for (const BenchRow& r : rows) {
        const BenchConfig& c = r.config;
        std::snprintf(line, sizeof(line), "%10lld %5s %4d %8s %10s %4d %5d %14.0f %12.1f %016llx\n",
                      c.n_data, to_string(c.kind), c.kind == QueryKind::knn ? c.k : 1,
                      maxr_text(c.max_radius).c_str(), to_string(c.engine),
                      c.threads > 0 ? c.threads : hardware_threads(), c.reps, r.queries_per_second,
                      r.nodes_processed_per_query,
                      static_cast<unsigned long long>(r.result_hash));
        out << line;
    }
}

void write_bench_csv(std::ostream& out, std::span<const BenchRow> rows) {
    out << "n,query,k,max_r,engine,threads,reps,total_queries,wall_time_s,queries_per_second,"
           "nodes_processed_per_query,steps_per_query,result_hash\n";
    char line[320];
    for (const BenchRow& r : rows) {
        const BenchConfig& c = r.config;
        std::snprintf(line, sizeof(line), "%lld,%s,%d,%s,%s,%d,%d,%lld,%.6f,%.1f,%.3f,%.3f,%016llx\n",
                      c.n_data, to_string(c.kind), c.kind == QueryKind::knn ? c.k : 1,
                      maxr_text(c.max_radius).c_str(), to_string(c.engine),
                      c.threads > 0 ? c.threads : hardware_threads(), c.reps, r.total_queries,
                      r.wall_time, r.queries_per_second, r.nodes_processed_per_query,
                      r.steps_per_query, static_cast<unsigned long long>(r.result_hash));
        out << line;
    }
}

} // namespace flatkd
