#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "gpsr/engine.hpp"

namespace gpsr {

struct BatchSummary {
    std::size_t best_run = 0;       // run index attaining the batch best
    Fitness best_fitness;           // best of all runs
    int best_found_at = 0;          // generation-of-best of that run
    double median_best = 0.0;       // median of per-run best fitness
    double mean_best = 0.0;         // mean of per-run best fitness
    double median_best_found_at = 0.0;
};

struct BatchReport {
    std::string config_digest;
    std::vector<std::uint64_t> seeds;
    std::vector<RunResult> runs;
    BatchSummary summary;
};

struct SweepRow {
    double ratio = 0.5;
    Fitness best_fitness;
    int best_found_at = 0;
    BatchReport report;  // per-run detail for this ratio
};

/// Flat key = value config file; '#' starts a comment. Unspecified keys take
/// the benchmark defaults. Throws ConfigError with a line number on parse
/// errors, unknown keys, or invalid values.
GPConfig load_config(const std::filesystem::path& path);

/// Canonical key = value rendering of the effective config.
std::string config_digest(const GPConfig& config);

/// Run i's seed is the i-th output of a SplitMix64 stream seeded with
/// master_seed, so batches are reproducible and order-independent.
std::uint64_t derive_seed(std::uint64_t master_seed, std::size_t run_index);

BatchReport run_batch(const GPConfig& config, int run_count, std::uint64_t master_seed);

/// Switch-ratio sweep: operator forced to msbc, one batch per ratio with
/// switch_ratio overridden. Ratios must lie in (0,1).
std::vector<SweepRow> ratio_sweep(const GPConfig& base_config, std::span<const double> ratios,
                                  int run_count, std::uint64_t master_seed);

/// Header "generation,best_fitness,mean_fitness,best_size,invalid_count",
/// one row per generation 0..G. Invalid fitness renders as "inf".
void write_run_csv(const RunResult& result, std::ostream& out);

/// run_<id>.csv per run, summary.csv (run_id,seed,best_fitness,best_found_at),
/// and config.txt. Returns the written paths.
std::vector<std::filesystem::path> write_batch_reports(const BatchReport& report,
                                                       const std::filesystem::path& out_dir);

/// sweep.csv (ratio,best_fitness,best_found_at) plus a ratio_<pct> directory
/// of batch reports per row.
std::vector<std::filesystem::path> write_sweep_reports(std::span<const SweepRow> rows,
                                                       const std::filesystem::path& out_dir);

/// Operator comparison table: one row per (label, report) pair with the
/// batch medians, for side-by-side operator runs.
void write_comparison_csv(std::span<const std::string> labels,
                          std::span<const BatchReport> reports, std::ostream& out);

std::string format_fitness(const Fitness& f);

}  // namespace gpsr
