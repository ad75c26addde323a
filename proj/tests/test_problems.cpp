#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gpsr/problems.hpp"

using namespace gpsr;

TEST_CASE("target values at pinned points") {
    double zeros5[] = {0, 0, 0, 0, 0};
    double one[] = {1.0};
    double zero[] = {0.0};
    CHECK(target_eval(default_problem(ProblemId::P3), zero) == 4.0);
    CHECK(target_eval(default_problem(ProblemId::P2), one) == 0.0);
    CHECK(target_eval(default_problem(ProblemId::P1), zeros5) == 0.0);
}

TEST_CASE("P2 target is an even polynomial") {
    auto spec = default_problem(ProblemId::P2);
    Rng rng(1);
    for (int i = 0; i < 200; ++i) {
        double x = rng.uniform(-2.0, 2.0);
        double pos[] = {x}, neg[] = {-x};
        CHECK(target_eval(spec, pos) == doctest::Approx(target_eval(spec, neg)));
    }
}

TEST_CASE("generate_cases respects counts, bounds, and determinism") {
    auto spec = default_problem(ProblemId::P2);
    Rng a(42), b(42);
    auto cases = generate_cases(spec, a);
    auto again = generate_cases(spec, b);
    CHECK(cases.case_count() == 20);
    CHECK(cases.variable_count() == 1);
    for (std::size_t i = 0; i < cases.case_count(); ++i) {
        CHECK(cases.row(i)[0] >= -1.0);
        CHECK(cases.row(i)[0] <= 1.0);
    }
    CHECK(cases.inputs == again.inputs);
    CHECK(cases.targets == again.targets);
}

TEST_CASE("P1 cases have five columns") {
    Rng rng(9);
    auto cases = generate_cases(default_problem(ProblemId::P1), rng);
    CHECK(cases.case_count() == 50);
    CHECK(cases.variable_count() == 5);
    CHECK(cases.row(0).size() == 5);
}

TEST_CASE("a tree encoding the target has fitness zero") {
    auto pset = primitive_set_for(ProblemId::P3);
    // 2x^2 - 3x + 4 over {add, sub, mul} and constants
    auto t = parse("(add (sub (mul 2 (mul x x)) (mul 3 x)) 4)", pset);
    Rng rng(5);
    auto cases = generate_cases(default_problem(ProblemId::P3), rng);
    auto f = fitness_of(t, cases);
    REQUIRE(f.valid);
    CHECK(f.value == 0.0);
}

TEST_CASE("non-finite evaluation yields the invalid sentinel") {
    auto pset = full_primitive_set({"x"});
    auto t = parse("(exp (exp (exp x)))", pset);
    FitnessCases cases;
    cases.variable_names = {"x"};
    cases.inputs = {40.0};
    cases.targets = {0.0};
    auto f = fitness_of(t, cases);
    CHECK_FALSE(f.valid);
    CHECK(Fitness(1e300) < f);  // sentinel orders after every finite fitness
    CHECK(f == Fitness::invalid_sentinel());
}

TEST_CASE("constant-zero tree on P2 equals mean of squared targets") {
    auto spec = default_problem(ProblemId::P2);
    Rng rng(77);
    auto cases = generate_cases(spec, rng);
    auto pset = primitive_set_for(ProblemId::P2);
    // oracle: direct summation over the generated cases
    double expected = 0.0;
    for (std::size_t i = 0; i < cases.case_count(); ++i)
        expected += cases.targets[i] * cases.targets[i];
    expected /= static_cast<double>(cases.case_count());
    auto zero = parse("(sub x x)", pset);
    auto f = fitness_of(zero, cases);
    REQUIRE(f.valid);
    CHECK(f.value == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("mae metric matches a direct absolute-error oracle") {
    auto spec = default_problem(ProblemId::P3);
    Rng rng(13);
    auto cases = generate_cases(spec, rng);
    auto pset = primitive_set_for(ProblemId::P3);
    auto t = parse("(mul x x)", pset);
    double expected = 0.0;
    for (std::size_t i = 0; i < cases.case_count(); ++i) {
        double x = cases.row(i)[0];
        expected += std::fabs(x * x - cases.targets[i]);
    }
    expected /= static_cast<double>(cases.case_count());
    auto f = fitness_of(t, cases, FitnessMetric::Mae);
    REQUIRE(f.valid);
    CHECK(f.value == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("fitness is non-negative and deterministic") {
    auto pset = primitive_set_for(ProblemId::P2);
    Rng rng(3);
    auto cases = generate_cases(default_problem(ProblemId::P2), rng);
    for (int i = 0; i < 100; ++i) {
        auto t = grow_tree(pset, 3, 25, rng);
        auto f1 = fitness_of(t, cases);
        auto f2 = fitness_of(t, cases);
        CHECK(f1 == f2);
        if (f1.valid) CHECK(f1.value >= 0.0);
    }
}

TEST_CASE("cases CSV has a header and one row per case") {
    Rng rng(4);
    auto cases = generate_cases(default_problem(ProblemId::P2), rng);
    std::ostringstream out;
    write_cases_csv(cases, out);
    auto text = out.str();
    std::size_t lines = 0;
    for (char c : text)
        if (c == '\n') ++lines;
    CHECK(lines == 21);
    CHECK(text.rfind("x,target\n", 0) == 0);
}
