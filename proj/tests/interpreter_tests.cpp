#include <catch2/catch_amalgamated.hpp>

#include "cpbpv/corpus.hpp"
#include "cpbpv/interpreter.hpp"
#include "cpbpv/parser.hpp"

using namespace cpbpv;

namespace {

ProgramAst load(const std::string& name, std::map<std::string, i64> bind = {}) {
    return substitute_params(parse_program(corpus_entry(name).source), bind);
}

}  // namespace

TEST_CASE("the buggy classifier returns isosceles for a degenerate triple") {
    ProgramAst ast = load("tritype_bug");
    ConcreteInput in;
    in.scalars = {{"i", 1}, {"j", 1}, {"k", 2}};
    ExecResult r = concrete_interpret(ast, in, 8);
    REQUIRE(r.outcome == ExecResult::Outcome::Returned);
    CHECK(r.value == 2);
}

TEST_CASE("the buggy search misses a present value on the published inputs") {
    ProgramAst ast = load("binary_search_bug", {{"N", 8}});
    ConcreteInput in;
    in.scalars = {{"v", -126}};
    in.arrays["t"] = {-128, -127, -126, -125, -124, -123, -122, -121};
    ExecResult r = concrete_interpret(ast, in, 8);
    REQUIRE(r.outcome == ExecResult::Outcome::Returned);
    CHECK(r.value == -1);
    CHECK(in.arrays["t"][2] == -126);  // although the value is present
}

TEST_CASE("the correct search finds a member") {
    ProgramAst ast = load("binary_search", {{"N", 8}});
    ConcreteInput in;
    in.arrays["t"] = {-5, -2, 0, 3, 4, 9, 11, 40};
    in.scalars = {{"v", -5}};
    ExecResult r = concrete_interpret(ast, in, 8);
    REQUIRE(r.outcome == ExecResult::Outcome::Returned);
    CHECK(in.arrays["t"][static_cast<size_t>(r.value)] == -5);
}

TEST_CASE("decision tags carry header-relative lines") {
    ProgramAst ast = load("binary_search", {{"N", 4}});
    ConcreteInput in;
    in.arrays["t"] = {0, 1, 2, 3};
    in.scalars = {{"v", 0}};  // probe index 1, go left, find at index 0
    ExecResult r = concrete_interpret(ast, in, 8);
    REQUIRE(r.outcome == ExecResult::Outcome::Returned);
    CHECK(r.value == 0);
    CHECK(to_string(r.trace) == "T4,F6,T8,T4,T6");
}

TEST_CASE("an assignment leaving the bit range leaves the modeled domain") {
    ProgramAst ast = parse_program("int f(int x) { int y = x + x; return y; }");
    ConcreteInput in;
    in.scalars = {{"x", 100}};
    CHECK(concrete_interpret(ast, in, 8).outcome == ExecResult::Outcome::OutOfDomain);
    CHECK(concrete_interpret(ast, in, 16).outcome == ExecResult::Outcome::Returned);
    // with overflow checking the same run is a reported failure instead
    CHECK(concrete_interpret(ast, in, 8, true).outcome == ExecResult::Outcome::OverflowFailed);
}

TEST_CASE("division by zero and out-of-range indexing are undefined") {
    ProgramAst div = parse_program("int f(int x) { int y = 10 / x; return y; }");
    ConcreteInput in;
    in.scalars = {{"x", 0}};
    CHECK(concrete_interpret(div, in, 8).outcome == ExecResult::Outcome::OutOfDomain);

    ProgramAst idx = parse_program("int f(int[2] a, int i) { return a[i]; }");
    ConcreteInput in2;
    in2.arrays["a"] = {1, 2};
    in2.scalars = {{"i", 5}};
    CHECK(concrete_interpret(idx, in2, 8).outcome == ExecResult::Outcome::OutOfDomain);
}

TEST_CASE("asserts fail concretely with their line") {
    ProgramAst ast = parse_program("int f(int x) {\n    assert(x > 0);\n    return x;\n}");
    ConcreteInput in;
    in.scalars = {{"x", -1}};
    ExecResult r = concrete_interpret(ast, in, 8);
    CHECK(r.outcome == ExecResult::Outcome::AssertFailed);
    CHECK(r.fail_line == 2);
}

TEST_CASE("calls run the callee body with the contract precondition checked") {
    ProgramAst ast = load("selection_sort", {{"N", 4}});
    ProgramAst fm = load("find_min", {{"N", 4}});
    std::map<std::string, const ProgramAst*> bodies{{"find_min", &fm}};
    ConcreteInput in;
    in.arrays["t"] = {3, 1, 2, 0};
    ExecResult r = concrete_interpret(ast, in, 8, false, bodies);
    REQUIRE(r.outcome == ExecResult::Outcome::Returned);
    CHECK(r.final_arrays.at("t") == std::vector<i64>{0, 1, 2, 3});
}

// ---- exhaustive verification ----

TEST_CASE("the correct classifier is exhaustively correct at four bits") {
    ProgramAst ast = load("tritype");
    BruteResult r = brute_force_verify(ast, 4);
    CHECK(r.verdict == ExecVerdict::PartiallyCorrect);
    CHECK(r.inputs_admitted > 0);
}

TEST_CASE("the buggy classifier is exhaustively refuted with the canonical witness") {
    ProgramAst ast = load("tritype_bug");
    BruteResult r = brute_force_verify(ast, 4);
    CHECK(r.verdict == ExecVerdict::PostconditionViolation);
    REQUIRE(r.witness);
    CHECK(r.witness->scalars.at("i") == 1);
    CHECK(r.witness->scalars.at("j") == 1);
    CHECK(r.witness->scalars.at("k") == 2);
}

TEST_CASE("the squares of a three-element permutation sum to fourteen") {
    ProgramAst ast = load("sum_of_squares", {{"N", 3}});
    ConcreteInput in;
    in.arrays["t"] = {2, 3, 1};
    ExecResult r = concrete_interpret(ast, in, 16);
    REQUIRE(r.outcome == ExecResult::Outcome::Returned);
    CHECK(r.value == 14);
    CHECK(r.value == 3 * 4 * 7 / 6);
    BruteResult b = brute_force_verify(ast, 5);
    CHECK(b.verdict == ExecVerdict::PartiallyCorrect);
    CHECK(b.inputs_admitted == 6);  // the permutations of {1,2,3}
}

TEST_CASE("an oversized input space is rejected") {
    ProgramAst ast = load("binary_search", {{"N", 8}});
    CHECK_THROWS_AS(brute_force_verify(ast, 8), VerifyError);
}
