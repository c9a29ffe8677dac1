#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "flatkd/batch.hpp"

namespace flatkd {

struct BenchConfig {
    long long n_data = 1000;
    long long n_queries = 10'000'000;
    int k_dim = 4;
    QueryKind kind = QueryKind::fcp;
    int k = 8;
    float max_radius = kInfRadius;
    std::uint64_t seed = 1;
    int reps = 100;
    int threads = 0; // 0 = all available
    Engine engine = Engine::stack_free;
};

struct BenchRow {
    BenchConfig config;
    long long total_queries = 0;         // n_queries * reps
    double wall_time = 0.0;              // seconds across all reps, query kernel only
    double queries_per_second = 0.0;     // total_queries / wall_time
    double nodes_processed_per_query = 0.0;
    double steps_per_query = 0.0;
    std::uint64_t result_hash = 0;       // identical for identical result sets
};

// Generates data and queries from the seed streams, builds the tree once,
// then times `reps` full passes of the query batch. Build and generation
// stay outside the clock; node counters come from one extra untimed pass.
BenchRow run_bench(const BenchConfig& config);

// Grid runner: one row per (n, cell). For fcp the cell list collapses to a
// single column; for knn it is the cross product of k_list and maxr_list.
// Data and tree are reused across the cells of each n.
std::vector<BenchRow> run_bench_matrix(const BenchConfig& base, std::span<const long long> n_list,
                                       std::span<const int> k_list,
                                       std::span<const float> maxr_list);

void print_bench_table(std::ostream& out, std::span<const BenchRow> rows);
void write_bench_csv(std::ostream& out, std::span<const BenchRow> rows);

} // namespace flatkd
