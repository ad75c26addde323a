#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gpsr/operators.hpp"
#include "gpsr/problems.hpp"

namespace gpsr {

enum class OperatorKind { Subtree, Sbc, Msbc };

std::string_view operator_name(OperatorKind op);

// Full run specification. Defaults follow the benchmark setup: population
// 100, 50 generations, tree sizes 3..25, tournament of 7, crossover 0.8,
// mutation 0.1, one elite.
struct GPConfig {
    int population_size = 100;
    int max_generations = 50;
    int min_tree_size = 3;
    int max_tree_size = 25;
    int tournament_k = 7;
    double crossover_probability = 0.8;
    double mutation_probability = 0.1;
    OperatorKind op = OperatorKind::Subtree;
    BroodConfig brood;
    ProblemId problem = ProblemId::P2;
    std::optional<int> case_count;                              // default per problem
    std::optional<std::pair<double, double>> sampling_interval; // default per problem
    FitnessMetric metric = FitnessMetric::Mse;
    int elite_count = 1;
    std::optional<std::uint64_t> seed;  // nullopt: wall clock at run start

    void validate() const;  // throws ConfigError
    ProblemSpec problem_spec() const;
    SizeBounds bounds() const { return {min_tree_size, max_tree_size}; }
};

struct GenerationStats {
    int generation = 0;
    Fitness best_fitness;
    double mean_fitness = 0.0;  // over valid individuals only; NaN if none
    int best_size = 0;
    int invalid_count = 0;
};

struct RunResult {
    std::vector<GenerationStats> stats;  // generations 0..max_generations
    Individual best;
    int best_found_at = 0;  // first generation attaining the final best fitness
    std::uint64_t seed_used = 0;
};

// Per-run immutable state: the effective config, the problem's primitive
// vocabulary, and the fitness cases generated once from the run's seed.
struct RunContext {
    GPConfig config;
    PrimitiveSet pset;
    FitnessCases cases;
};

RunContext make_context(const GPConfig& config, Rng& rng);

std::vector<Individual> init_population(const RunContext& ctx, Rng& rng);

/// One generational step: elites copied, remainder bred in pairs via
/// tournament + the configured crossover operator, offspring mutated
/// independently. Output size equals input size; the final pair contributes
/// only its first child when one slot remains.
std::vector<Individual> step_generation(const std::vector<Individual>& population,
                                        const RunContext& ctx, int generation_index, Rng& rng);

GenerationStats compute_stats(std::span<const Individual> population, int generation);

/// Full run: cases and population from the seed, exactly max_generations
/// steps, stats for generation 0 and after each step. Deterministic given
/// (config, seed).
RunResult run(const GPConfig& config);

}  // namespace gpsr
