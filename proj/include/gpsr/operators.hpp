#pragma once

#include <span>
#include <utility>
#include <vector>

#include "gpsr/exprtree.hpp"
#include "gpsr/fitness.hpp"
#include "gpsr/problems.hpp"
#include "gpsr/rng.hpp"

namespace gpsr {

struct Individual {
    ExprTree genome;
    Fitness fitness;
};

struct SizeBounds {
    int min_size = 3;
    int max_size = 25;
};

struct BroodConfig {
    int brood_n = 4;           // crossovers per pair, yielding 2N children
    double switch_ratio = 0.5; // generation fraction where MSBC switches mode
    int max_retries = 10;      // size-constraint retries in crossover/mutation
};

/// k uniform samples with replacement; minimum fitness wins, first sampled
/// wins ties. Throws std::invalid_argument on an empty population.
const Individual& tournament_select(std::span<const Individual> population, int k, Rng& rng);

/// One crossover point per parent, uniform over all nodes; subtrees swapped.
/// Point pairs yielding an out-of-bounds child are redrawn up to max_retries
/// times; on exhaustion the parents are returned unchanged.
std::pair<ExprTree, ExprTree> subtree_crossover(const ExprTree& p1, const ExprTree& p2,
                                                SizeBounds bounds, int max_retries, Rng& rng);

/// brood_n independent crossovers on the same pair, both children of each
/// kept in operation order: 2 * brood_n trees.
std::vector<ExprTree> brood_generate(const ExprTree& p1, const ExprTree& p2, int brood_n,
                                     SizeBounds bounds, int max_retries, Rng& rng);

/// Indices of the two lowest-fitness brood members, ties broken by lowest
/// index; returned best first. Throws on broods smaller than 2.
std::pair<std::size_t, std::size_t> sbc_select(std::span<const Individual> brood);

/// True while generation <= switch_ratio * total_generations (real-valued
/// comparison, no rounding).
bool msbc_first_half(int generation, int total_generations, double switch_ratio);

/// First-half mode: the most fitness-dissimilar pair, which is the minimum-
/// and maximum-fitness members (sentinels rank maximal, ties lowest index).
/// Second-half mode: identical to sbc_select.
std::pair<std::size_t, std::size_t> msbc_select(std::span<const Individual> brood, int generation,
                                                int total_generations, double switch_ratio);

/// Replaces a uniformly chosen subtree with a freshly grown one sized to
/// keep the result in bounds; after max_retries infeasible picks returns a
/// copy of the input.
ExprTree subtree_mutate(const ExprTree& tree, const PrimitiveSet& pset, SizeBounds bounds,
                        int max_retries, Rng& rng);

}  // namespace gpsr
