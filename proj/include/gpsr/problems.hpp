#pragma once

#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gpsr/exprtree.hpp"
#include "gpsr/fitness.hpp"
#include "gpsr/rng.hpp"

namespace gpsr {

enum class ProblemId { P1, P2, P3 };

std::string_view problem_name(ProblemId id);

struct ProblemSpec {
    ProblemId id = ProblemId::P2;
    std::vector<std::string> variable_names;
    int case_count = 20;
    std::pair<double, double> sampling_interval{-1.0, 1.0};
};

// Benchmark targets:
//   P1: cos(sqrt(sin q)) * cos(p) * sin(x) + tan(r - s), variables (x,p,q,r,s)
//   P2: x^6 - 2x^4 + x^2 (sextic polynomial)
//   P3: 2x^2 - 3x + 4
// Default sampling: P1 draws all five variables on [0,1] (keeps tan away
// from poles and sin(q) >= 0); P2 and P3 draw x on [-1,1]. P1 uses 50 cases,
// P2 and P3 use 20. Counts and intervals are overridable via config.
ProblemSpec default_problem(ProblemId id);

/// Function/terminal vocabulary per problem: P1 {add,sub,mul,sqrt,sin,cos,tan}
/// over (x,p,q,r,s); P2 {add,sub,mul} over x; P3 adds constants on [0,1].
PrimitiveSet primitive_set_for(ProblemId id);

/// Every function primitive the evaluator understands, for parsing and
/// ad-hoc tree construction.
PrimitiveSet full_primitive_set(std::vector<std::string> variable_names);

double target_eval(const ProblemSpec& problem, std::span<const double> row);

struct FitnessCases {
    std::vector<std::string> variable_names;
    std::vector<double> inputs;   // row-major, case_count x variable count
    std::vector<double> targets;

    std::size_t case_count() const { return targets.size(); }
    std::size_t variable_count() const { return variable_names.size(); }
    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(inputs).subspan(i * variable_count(), variable_count());
    }
};

/// Uniform samples per variable from the problem's interval; targets via
/// target_eval. Deterministic for a fixed rng state.
FitnessCases generate_cases(const ProblemSpec& problem, Rng& rng);

enum class FitnessMetric { Mse, Mae };

/// Mean squared (or absolute) error over the cases, lower is better. Any
/// non-finite evaluation yields the invalid sentinel.
Fitness fitness_of(const ExprTree& tree, const FitnessCases& cases,
                   FitnessMetric metric = FitnessMetric::Mse);

/// Audit dump: header "x,...,target", one row per case.
void write_cases_csv(const FitnessCases& cases, std::ostream& out);

}  // namespace gpsr
