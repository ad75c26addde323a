#include "gpsr/operators.hpp"

#include <algorithm>
#include <stdexcept>

namespace gpsr {

const Individual& tournament_select(std::span<const Individual> population, int k, Rng& rng) {
    if (population.empty()) throw std::invalid_argument("tournament_select: empty population");
    if (k < 1) throw std::invalid_argument("tournament_select: k must be >= 1");
    const Individual* best = nullptr;
    for (int i = 0; i < k; ++i) {
        const Individual& candidate = population[rng.index(population.size())];
        if (best == nullptr || candidate.fitness < best->fitness) best = &candidate;
    }
    return *best;
}

std::pair<ExprTree, ExprTree> subtree_crossover(const ExprTree& p1, const ExprTree& p2,
                                                SizeBounds bounds, int max_retries, Rng& rng) {
    for (int attempt = 0; attempt <= max_retries; ++attempt) {
        std::size_t i = rng.index(p1.size());
        std::size_t j = rng.index(p2.size());
        auto a = static_cast<std::ptrdiff_t>(p1.subtree_end(i) - i);
        auto b = static_cast<std::ptrdiff_t>(p2.subtree_end(j) - j);
        auto s1 = static_cast<std::ptrdiff_t>(p1.size()) - a + b;
        auto s2 = static_cast<std::ptrdiff_t>(p2.size()) - b + a;
        if (s1 >= bounds.min_size && s1 <= bounds.max_size && s2 >= bounds.min_size &&
            s2 <= bounds.max_size) {
            ExprTree sub1 = p1.subtree(i);
            ExprTree sub2 = p2.subtree(j);
            return {replace_subtree(p1, i, sub2), replace_subtree(p2, j, sub1)};
        }
    }
    return {p1, p2};
}

std::vector<ExprTree> brood_generate(const ExprTree& p1, const ExprTree& p2, int brood_n,
                                     SizeBounds bounds, int max_retries, Rng& rng) {
    if (brood_n < 1) throw std::invalid_argument("brood_generate: brood_n must be >= 1");
    std::vector<ExprTree> brood;
    brood.reserve(static_cast<std::size_t>(2 * brood_n));
    for (int i = 0; i < brood_n; ++i) {
        auto [c1, c2] = subtree_crossover(p1, p2, bounds, max_retries, rng);
        brood.push_back(std::move(c1));
        brood.push_back(std::move(c2));
    }
    return brood;
}

std::pair<std::size_t, std::size_t> sbc_select(std::span<const Individual> brood) {
    if (brood.size() < 2) throw std::invalid_argument("sbc_select: brood must have >= 2 members");
    std::size_t best = 0;
    for (std::size_t i = 1; i < brood.size(); ++i)
        if (brood[i].fitness < brood[best].fitness) best = i;
    std::size_t second = best == 0 ? 1 : 0;
    for (std::size_t i = 0; i < brood.size(); ++i) {
        if (i == best || i == second) continue;
        if (brood[i].fitness < brood[second].fitness) second = i;
    }
    return {best, second};
}

bool msbc_first_half(int generation, int total_generations, double switch_ratio) {
    return static_cast<double>(generation) <=
           switch_ratio * static_cast<double>(total_generations);
}

std::pair<std::size_t, std::size_t> msbc_select(std::span<const Individual> brood, int generation,
                                                int total_generations, double switch_ratio) {
    if (brood.size() < 2) throw std::invalid_argument("msbc_select: brood must have >= 2 members");
    if (!msbc_first_half(generation, total_generations, switch_ratio)) return sbc_select(brood);
    std::size_t lo = 0;
    for (std::size_t i = 1; i < brood.size(); ++i)
        if (brood[i].fitness < brood[lo].fitness) lo = i;
    std::size_t hi = lo == 0 ? 1 : 0;
    for (std::size_t i = 0; i < brood.size(); ++i) {
        if (i == lo || i == hi) continue;
        if (brood[hi].fitness < brood[i].fitness) hi = i;
    }
    return {lo, hi};
}

ExprTree subtree_mutate(const ExprTree& tree, const PrimitiveSet& pset, SizeBounds bounds,
                        int max_retries, Rng& rng) {
    for (int attempt = 0; attempt <= max_retries; ++attempt) {
        std::size_t idx = rng.index(tree.size());
        auto sub_size = static_cast<int>(tree.subtree_end(idx) - idx);
        int rest = static_cast<int>(tree.size()) - sub_size;
        int lo = std::max(1, bounds.min_size - rest);
        int hi = bounds.max_size - rest;
        if (hi < lo || !tree_size_constructible(pset, lo, hi)) continue;
        ExprTree grown = grow_tree(pset, lo, hi, rng);
        return replace_subtree(tree, idx, grown);
    }
    return tree;
}

}  // namespace gpsr
