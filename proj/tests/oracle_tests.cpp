#include <catch2/catch_amalgamated.hpp>

#include "cpbpv/corpus.hpp"
#include "cpbpv/interpreter.hpp"
#include "cpbpv/verifier.hpp"
#include "test_support.hpp"

using namespace cpbpv;

// Differential testing: the symbolic executor's verdict must coincide with
// exhaustive concrete enumeration wherever the input space is enumerable.

namespace {

struct Comparison {
    ExecVerdict symbolic;
    ExecVerdict brute;
};

Comparison compare(const ProgramAst& ast, int bits,
                   const std::map<std::string, const ProgramAst*>& bodies = {}) {
    ExecOptions opts;
    opts.solver.bits = bits;
    VerificationReport rep = explore(ast, {}, opts);
    BruteResult br = brute_force_verify(ast, bits, bodies);

    // when both report a violation, both witnesses must replay concretely
    if (rep.violation) {
        ConcreteInput inputs = project_inputs(ast, rep.violation->witness);
        WitnessValidation val =
            validate_witness(ast, *rep.violation, inputs, bits, false, bodies);
        CHECK(val.ok());
    }
    return {rep.verdict, br.verdict};
}

}  // namespace

TEST_CASE("executor and oracle agree on the whole corpus at small bounds") {
    struct Case {
        const char* name;
        std::map<std::string, i64> bind;
    };
    const Case cases[] = {
        {"binary_search", {{"N", 3}}},    {"binary_search_bug", {{"N", 3}}},
        {"tritype", {}},                  {"tritype_bug", {}},
        {"bubble_sort", {{"N", 3}}},      {"sum_of_squares", {{"N", 3}}},
        {"find_min", {{"N", 3}}},
    };
    for (const auto& c : cases) {
        INFO(c.name);
        ProgramAst ast = substitute_params(parse_program(corpus_entry(c.name).source), c.bind);
        Comparison cmp = compare(ast, 4);
        CHECK(cmp.symbolic == cmp.brute);
    }
}

TEST_CASE("modular selection sort agrees with running the real callee") {
    ProgramAst ast =
        substitute_params(parse_program(corpus_entry("selection_sort").source), {{"N", 3}});
    ProgramAst fm = substitute_params(parse_program(corpus_entry("find_min").source), {{"N", 3}});
    std::map<std::string, const ProgramAst*> bodies{{"find_min", &fm}};

    ExecOptions opts;
    opts.solver.bits = 4;
    VerificationReport rep = explore(ast, {}, opts);
    BruteResult br = brute_force_verify(ast, 4, bodies);
    CHECK(rep.verdict == ExecVerdict::PartiallyCorrect);
    CHECK(br.verdict == ExecVerdict::PartiallyCorrect);
}

TEST_CASE("executor and oracle agree on random programs") {
    testing::Rng rng(0x0D15EA5E);
    int agreements = 0, violations = 0;
    for (int round = 0; round < 60; ++round) {
        std::string src = testing::random_program(rng);
        INFO(src);
        ProgramAst ast = parse_program(src);
        Comparison cmp = compare(ast, 4);
        CHECK(cmp.symbolic == cmp.brute);
        if (cmp.symbolic == cmp.brute) ++agreements;
        if (cmp.symbolic != ExecVerdict::PartiallyCorrect) ++violations;
    }
    CHECK(agreements == 60);
    CHECK(violations > 5);  // the generator produces real violations too
}

TEST_CASE("violating witnesses replay through the interpreter on the buggy corpus") {
    for (const char* name : {"binary_search_bug", "tritype_bug"}) {
        INFO(name);
        std::map<std::string, i64> bind;
        if (std::string(name) == "binary_search_bug") bind["N"] = 8;
        ProgramAst ast = substitute_params(parse_program(corpus_entry(name).source), bind);
        ExecOptions opts;
        opts.solver.bits = 8;
        VerificationReport rep = explore(ast, {}, opts);
        REQUIRE(rep.violation);
        ConcreteInput inputs = project_inputs(ast, rep.violation->witness);
        WitnessValidation val = validate_witness(ast, *rep.violation, inputs, 8, false);
        CHECK(val.performed);
        CHECK(val.pre_holds);
        CHECK(val.trace_matches);
        CHECK(val.outcome_confirmed);
    }
}
