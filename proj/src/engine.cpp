#include "gpsr/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace gpsr {

std::string_view operator_name(OperatorKind op) {
    switch (op) {
        case OperatorKind::Subtree: return "subtree";
        case OperatorKind::Sbc: return "sbc";
        case OperatorKind::Msbc: return "msbc";
    }
    return "?";
}

void GPConfig::validate() const {
    if (population_size < 1) throw ConfigError("population_size must be >= 1");
    if (max_generations < 1) throw ConfigError("max_generations must be >= 1");
    if (min_tree_size < 1 || min_tree_size > max_tree_size)
        throw ConfigError("require 1 <= min_tree_size <= max_tree_size");
    if (tournament_k < 1) throw ConfigError("tournament_k must be >= 1");
    if (crossover_probability < 0.0 || crossover_probability > 1.0)
        throw ConfigError("crossover_probability must lie in [0,1]");
    if (mutation_probability < 0.0 || mutation_probability > 1.0)
        throw ConfigError("mutation_probability must lie in [0,1]");
    if (brood.brood_n < 1) throw ConfigError("brood_n must be >= 1");
    if (!(brood.switch_ratio > 0.0 && brood.switch_ratio < 1.0))
        throw ConfigError("switch_ratio must lie in (0,1)");
    if (brood.max_retries < 1) throw ConfigError("max_retries must be >= 1");
    if (elite_count < 0 || elite_count >= population_size)
        throw ConfigError("require 0 <= elite_count < population_size");
    if (case_count && *case_count < 1) throw ConfigError("case_count must be >= 1");
    if (sampling_interval && !(sampling_interval->first <= sampling_interval->second))
        throw ConfigError("sampling interval must satisfy min <= max");
}

ProblemSpec GPConfig::problem_spec() const {
    ProblemSpec spec = default_problem(problem);
    if (case_count) spec.case_count = *case_count;
    if (sampling_interval) spec.sampling_interval = *sampling_interval;
    return spec;
}

RunContext make_context(const GPConfig& config, Rng& rng) {
    config.validate();
    RunContext ctx{config, primitive_set_for(config.problem), {}};
    ctx.cases = generate_cases(config.problem_spec(), rng);
    if (!tree_size_constructible(ctx.pset, config.min_tree_size, config.max_tree_size))
        throw ConfigError("no tree size in [min_tree_size, max_tree_size] is constructible");
    return ctx;
}

namespace {

Individual make_individual(ExprTree genome, const RunContext& ctx) {
    Fitness f = fitness_of(genome, ctx.cases, ctx.config.metric);
    return Individual{std::move(genome), f};
}

std::vector<std::size_t> fitness_order(std::span<const Individual> population) {
    std::vector<std::size_t> order(population.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return population[a].fitness < population[b].fitness;
    });
    return order;
}

}  // namespace

std::vector<Individual> init_population(const RunContext& ctx, Rng& rng) {
    std::vector<Individual> population;
    population.reserve(static_cast<std::size_t>(ctx.config.population_size));
    for (int i = 0; i < ctx.config.population_size; ++i)
        population.push_back(make_individual(
            grow_tree(ctx.pset, ctx.config.min_tree_size, ctx.config.max_tree_size, rng), ctx));
    return population;
}

std::vector<Individual> step_generation(const std::vector<Individual>& population,
                                        const RunContext& ctx, int generation_index, Rng& rng) {
    const GPConfig& cfg = ctx.config;
    auto bounds = cfg.bounds();
    std::vector<Individual> next;
    next.reserve(population.size());

    auto order = fitness_order(population);
    for (int e = 0; e < cfg.elite_count; ++e) next.push_back(population[order[static_cast<std::size_t>(e)]]);

    auto emit = [&](ExprTree genome) {
        if (rng.bernoulli(cfg.mutation_probability))
            genome = subtree_mutate(genome, ctx.pset, bounds, cfg.brood.max_retries, rng);
        next.push_back(make_individual(std::move(genome), ctx));
    };

    while (next.size() < population.size()) {
        const Individual& p1 = tournament_select(population, cfg.tournament_k, rng);
        const Individual& p2 = tournament_select(population, cfg.tournament_k, rng);
        ExprTree c1, c2;
        if (rng.bernoulli(cfg.crossover_probability)) {
            switch (cfg.op) {
                case OperatorKind::Subtree: {
                    auto children =
                        subtree_crossover(p1.genome, p2.genome, bounds, cfg.brood.max_retries, rng);
                    c1 = std::move(children.first);
                    c2 = std::move(children.second);
                    break;
                }
                case OperatorKind::Sbc:
                case OperatorKind::Msbc: {
                    auto trees = brood_generate(p1.genome, p2.genome, cfg.brood.brood_n, bounds,
                                                cfg.brood.max_retries, rng);
                    std::vector<Individual> brood;
                    brood.reserve(trees.size());
                    for (auto& t : trees) brood.push_back(make_individual(std::move(t), ctx));
                    auto picked = cfg.op == OperatorKind::Sbc
                                      ? sbc_select(brood)
                                      : msbc_select(brood, generation_index, cfg.max_generations,
                                                    cfg.brood.switch_ratio);
                    c1 = brood[picked.first].genome;
                    c2 = brood[picked.second].genome;
                    break;
                }
            }
        } else {
            c1 = p1.genome;
            c2 = p2.genome;
        }
        bool room_for_two = population.size() - next.size() >= 2;
        emit(std::move(c1));
        if (room_for_two) emit(std::move(c2));
    }
    return next;
}

GenerationStats compute_stats(std::span<const Individual> population, int generation) {
    GenerationStats stats;
    stats.generation = generation;
    std::size_t best = 0;
    double sum = 0.0;
    int valid = 0;
    for (std::size_t i = 0; i < population.size(); ++i) {
        const Fitness& f = population[i].fitness;
        if (f < population[best].fitness) best = i;
        if (f.valid) {
            sum += f.value;
            ++valid;
        } else {
            ++stats.invalid_count;
        }
    }
    stats.best_fitness = population[best].fitness;
    stats.best_size = static_cast<int>(population[best].genome.size());
    stats.mean_fitness =
        valid > 0 ? sum / valid : std::numeric_limits<double>::quiet_NaN();
    return stats;
}

RunResult run(const GPConfig& config) {
    config.validate();
    RunResult result;
    result.seed_used = config.seed.value_or(time_seed());
    Rng rng(result.seed_used);
    RunContext ctx = make_context(config, rng);

    auto population = init_population(ctx, rng);
    result.stats.reserve(static_cast<std::size_t>(config.max_generations) + 1);
    result.stats.push_back(compute_stats(population, 0));
    for (int g = 1; g <= config.max_generations; ++g) {
        population = step_generation(population, ctx, g, rng);
        result.stats.push_back(compute_stats(population, g));
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < population.size(); ++i)
        if (population[i].fitness < population[best].fitness) best = i;
    result.best = population[best];
    result.best_found_at = config.max_generations;
    for (const auto& s : result.stats) {
        if (s.best_fitness == result.best.fitness) {
            result.best_found_at = s.generation;
            break;
        }
    }
    return result;
}

}  // namespace gpsr
