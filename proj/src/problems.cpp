#include "gpsr/problems.hpp"

#include <cmath>

namespace gpsr {

std::string_view problem_name(ProblemId id) {
    switch (id) {
        case ProblemId::P1: return "P1";
        case ProblemId::P2: return "P2";
        case ProblemId::P3: return "P3";
    }
    return "?";
}

ProblemSpec default_problem(ProblemId id) {
    ProblemSpec spec;
    spec.id = id;
    switch (id) {
        case ProblemId::P1:
            spec.variable_names = {"x", "p", "q", "r", "s"};
            spec.case_count = 50;
            spec.sampling_interval = {0.0, 1.0};
            break;
        case ProblemId::P2:
        case ProblemId::P3:
            spec.variable_names = {"x"};
            spec.case_count = 20;
            spec.sampling_interval = {-1.0, 1.0};
            break;
    }
    return spec;
}

PrimitiveSet primitive_set_for(ProblemId id) {
    PrimitiveSet pset;
    switch (id) {
        case ProblemId::P1:
            pset.functions = {Primitive::function(OpCode::Add), Primitive::function(OpCode::Sub),
                              Primitive::function(OpCode::Mul), Primitive::function(OpCode::Sqrt),
                              Primitive::function(OpCode::Sin), Primitive::function(OpCode::Cos),
                              Primitive::function(OpCode::Tan)};
            break;
        case ProblemId::P2:
        case ProblemId::P3:
            pset.functions = {Primitive::function(OpCode::Add), Primitive::function(OpCode::Sub),
                              Primitive::function(OpCode::Mul)};
            break;
    }
    auto spec = default_problem(id);
    for (std::size_t i = 0; i < spec.variable_names.size(); ++i)
        pset.variables.push_back(Primitive::variable(spec.variable_names[i], static_cast<int>(i)));
    if (id == ProblemId::P3) pset.ephemeral_range = {0.0, 1.0};
    return pset;
}

PrimitiveSet full_primitive_set(std::vector<std::string> variable_names) {
    PrimitiveSet pset;
    for (OpCode op : {OpCode::Add, OpCode::Sub, OpCode::Mul, OpCode::Div, OpCode::Sqrt,
                      OpCode::Sin, OpCode::Cos, OpCode::Tan, OpCode::Exp, OpCode::Log})
        pset.functions.push_back(Primitive::function(op));
    for (std::size_t i = 0; i < variable_names.size(); ++i)
        pset.variables.push_back(Primitive::variable(variable_names[i], static_cast<int>(i)));
    pset.ephemeral_range = {0.0, 1.0};
    return pset;
}

double target_eval(const ProblemSpec& problem, std::span<const double> row) {
    switch (problem.id) {
        case ProblemId::P1: {
            double x = row[0], p = row[1], q = row[2], r = row[3], s = row[4];
            return std::cos(std::sqrt(std::sin(q))) * std::cos(p) * std::sin(x) + std::tan(r - s);
        }
        case ProblemId::P2: {
            double x = row[0];
            double x2 = x * x;
            return x2 * x2 * x2 - 2.0 * x2 * x2 + x2;
        }
        case ProblemId::P3: {
            double x = row[0];
            return 2.0 * x * x - 3.0 * x + 4.0;
        }
    }
    return 0.0;
}

FitnessCases generate_cases(const ProblemSpec& problem, Rng& rng) {
    FitnessCases cases;
    cases.variable_names = problem.variable_names;
    std::size_t vars = problem.variable_names.size();
    std::size_t n = static_cast<std::size_t>(problem.case_count);
    cases.inputs.reserve(n * vars);
    cases.targets.reserve(n);
    auto [lo, hi] = problem.sampling_interval;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t v = 0; v < vars; ++v) cases.inputs.push_back(rng.uniform(lo, hi));
        cases.targets.push_back(target_eval(problem, cases.row(i)));
    }
    return cases;
}

Fitness fitness_of(const ExprTree& tree, const FitnessCases& cases, FitnessMetric metric) {
    double sum = 0.0;
    for (std::size_t i = 0; i < cases.case_count(); ++i) {
        double predicted = evaluate(tree, cases.row(i));
        if (!std::isfinite(predicted)) return Fitness::invalid_sentinel();
        double err = predicted - cases.targets[i];
        sum += metric == FitnessMetric::Mse ? err * err : std::fabs(err);
    }
    double mean = sum / static_cast<double>(cases.case_count());
    if (!std::isfinite(mean)) return Fitness::invalid_sentinel();
    return Fitness(mean);
}

void write_cases_csv(const FitnessCases& cases, std::ostream& out) {
    for (std::size_t v = 0; v < cases.variable_count(); ++v) out << cases.variable_names[v] << ',';
    out << "target\n";
    for (std::size_t i = 0; i < cases.case_count(); ++i) {
        auto r = cases.row(i);
        for (double x : r) out << format_double(x) << ',';
        out << format_double(cases.targets[i]) << '\n';
    }
}

}  // namespace gpsr
