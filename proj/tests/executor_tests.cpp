#include <catch2/catch_amalgamated.hpp>

#include "cpbpv/corpus.hpp"
#include "cpbpv/executor.hpp"
#include "cpbpv/parser.hpp"
#include "test_support.hpp"

using namespace cpbpv;

namespace {

ProgramAst bsearch8() {
    ProgramAst ast = parse_program(corpus_entry("binary_search").source);
    return substitute_params(ast, {{"N", 8}});
}

ExecOptions opts8() {
    ExecOptions o;
    o.solver.bits = 8;
    return o;
}

/// Runs deterministic steps until the next instruction is of the given kind.
Configuration advance_until(Executor& ex, Configuration cfg, Instr::Kind kind) {
    for (int guard = 0; guard < 1000; ++guard) {
        REQUIRE(cfg.status == Configuration::Status::Running);
        REQUIRE_FALSE(cfg.todo.empty());
        if (cfg.todo.back()->kind == kind) return cfg;
        std::vector<Configuration> succs = ex.step(cfg);
        REQUIRE(succs.size() == 1);
        cfg = std::move(succs.front());
    }
    FAIL("instruction kind never reached");
    return cfg;
}

}  // namespace

TEST_CASE("the two initial assignments extend the store with versioned equalities") {
    ProgramAst ast = bsearch8();
    Executor ex(ast, {}, opts8());
    Configuration cfg = ex.initial();
    size_t pre_size = cfg.store.size();  // the expanded precondition
    CHECK(pre_size == 7);

    std::vector<Configuration> s1 = ex.step(cfg);
    REQUIRE(s1.size() == 1);
    std::vector<Configuration> s2 = ex.step(s1.front());
    REQUIRE(s2.size() == 1);
    const ConstraintStore& st = s2.front().store;
    REQUIRE(st.size() == pre_size + 2);
    CHECK(to_string(st.at(pre_size)) == "l^0 = 0");
    CHECK(to_string(st.at(pre_size + 1)) == "u^0 = 7");
    // first assignments constrain version 0; the maps agree elsewhere
    CHECK(s2.front().sigma.version("l") == 0);
    CHECK(s2.front().sigma.version("u") == 0);
}

TEST_CASE("a conditional on symbolic data yields both successors") {
    ProgramAst ast = bsearch8();
    Executor ex(ast, {}, opts8());
    Configuration cfg = advance_until(ex, ex.initial(), Instr::Kind::While);
    // the first test folds to 0 <= 7: only the entering branch survives
    std::vector<Configuration> in = ex.step(cfg);
    REQUIRE(in.size() == 1);
    Configuration body = advance_until(ex, in.front(), Instr::Kind::If);
    std::vector<Configuration> branches = ex.step(body);
    REQUIRE(branches.size() == 2);
    CHECK(to_string(branches[0].store.at(branches[0].store.size() - 1)) == "t^0[3] = v^0");
    CHECK(to_string(branches[1].store.at(branches[1].store.size() - 1)) == "t^0[3] != v^0");
    CHECK(to_string(branches[0].trace.back()) == "T6");
    CHECK(to_string(branches[1].trace.back()) == "F6");
}

TEST_CASE("an array write through a variable index posts the element equality and guarded frames") {
    ProgramAst ast = parse_program(
        "requires i >= 0 && i < 3\n"
        "int f(int[3] a, int i) {\n"
        "    a[i] = 5;\n"
        "}\n");
    ast = substitute_params(ast, {});
    Executor ex(ast, {}, opts8());
    Configuration cfg = ex.initial();
    std::vector<Configuration> succ = ex.step(cfg);
    REQUIRE(succ.size() == 1);
    const ConstraintStore& st = succ.front().store;
    size_t base = cfg.store.size();
    REQUIRE(st.size() == base + 4);
    CHECK(to_string(st.at(base)) == "a^1[i^0] = 5");
    CHECK(to_string(st.at(base + 1)) == "i^0 != 0 ==> a^1[0] = a^0[0]");
    CHECK(to_string(st.at(base + 2)) == "i^0 != 1 ==> a^1[1] = a^0[1]");
    CHECK(to_string(st.at(base + 3)) == "i^0 != 2 ==> a^1[2] = a^0[2]");

    // oracle: for every concrete world (index value and array contents), the
    // posted constraints hold exactly of the concretely updated array
    for (i64 iv = 0; iv < 3; ++iv) {
        for (i64 seed = 0; seed < 8; ++seed) {
            std::vector<i64> before{seed % 2, (seed / 2) % 2, (seed / 4) % 2};
            std::vector<i64> after = before;
            after[static_cast<size_t>(iv)] = 5;
            Model m;
            m.scalars[{"i", 0}] = iv;
            m.arrays[{"a", 0}] = before;
            m.arrays[{"a", 1}] = after;
            for (size_t c = base; c < st.size(); ++c) {
                auto v = eval(st.at(c), m);
                REQUIRE(v.has_value());
                CHECK(*v);
            }
            // a wrong update (touching another cell) violates some frame
            Model bad = m;
            bad.arrays[{"a", 1}][static_cast<size_t>((iv + 1) % 3)] ^= 1;
            bool all = true;
            for (size_t c = base; c < st.size(); ++c) {
                auto v = eval(st.at(c), bad);
                all = all && v && *v;
            }
            CHECK_FALSE(all);
        }
    }
}

TEST_CASE("an entailed assert is a single successor with the store unchanged") {
    ProgramAst ast = parse_program(
        "requires x >= 5\n"
        "int f(int x) {\n"
        "    assert(x >= 0);\n"
        "    return x;\n"
        "}\n");
    Executor ex(ast, {}, opts8());
    Configuration cfg = ex.initial();
    std::string before = cfg.store.to_text();
    std::vector<Configuration> succ = ex.step(cfg);
    REQUIRE(succ.size() == 1);
    CHECK(succ.front().status == Configuration::Status::Running);
    CHECK(succ.front().store.to_text() == before);
}

TEST_CASE("a refutable assert terminates the path with a witness") {
    ProgramAst ast = parse_program(
        "int f(int x) {\n"
        "    assert(x >= 0);\n"
        "    return x;\n"
        "}\n");
    Executor ex(ast, {}, opts8());
    std::vector<Configuration> succ = ex.step(ex.initial());
    REQUIRE(succ.size() == 1);
    CHECK(succ.front().status == Configuration::Status::Bottom);
    // the witness satisfies store AND NOT b
    CHECK(succ.front().bottom_witness.scalars.at({"x", 0}) < 0);
}

TEST_CASE("enforce prunes the path when the conjunction is unsatisfiable") {
    ProgramAst ast = parse_program(
        "requires x > 0\n"
        "int f(int x) {\n"
        "    enforce(x < 0);\n"
        "    return x;\n"
        "}\n");
    Executor ex(ast, {}, opts8());
    std::vector<Configuration> succ = ex.step(ex.initial());
    CHECK(succ.empty());
    // and the satisfiable case proceeds, augmenting the store
    ProgramAst ok = parse_program(
        "int f(int x) {\n"
        "    enforce(x < 0);\n"
        "    return x;\n"
        "}\n");
    Executor ex2(ok, {}, opts8());
    std::vector<Configuration> succ2 = ex2.step(ex2.initial());
    REQUIRE(succ2.size() == 1);
    CHECK(to_string(succ2.front().store.at(succ2.front().store.size() - 1)) == "x^0 < 0");
}

TEST_CASE("return constrains the result variable and ends the path") {
    ProgramAst ast = parse_program("int f(int x) { return x + 1; }");
    Executor ex(ast, {}, opts8());
    std::vector<Configuration> succ = ex.step(ex.initial());
    REQUIRE(succ.size() == 1);
    CHECK(succ.front().status == Configuration::Status::Top);
    CHECK(to_string(succ.front().store.at(succ.front().store.size() - 1)) ==
          "result^0 = x^0 + 1");
}

TEST_CASE("successor stores extend the parent store as a prefix") {
    // the nondeterministic branching rules only ever append
    ProgramAst ast = bsearch8();
    Executor ex(ast, {}, opts8());
    std::vector<Configuration> frontier{ex.initial()};
    for (int depth = 0; depth < 30 && !frontier.empty(); ++depth) {
        std::vector<Configuration> next;
        for (auto& cfg : frontier) {
            if (cfg.status != Configuration::Status::Running) continue;
            std::string parent = cfg.store.to_text();
            for (auto& s : ex.step(cfg)) {
                CHECK(s.store.to_text().substr(0, parent.size()) == parent);
                next.push_back(std::move(s));
            }
        }
        frontier = std::move(next);
        if (frontier.size() > 8) frontier.resize(8);
    }
}

TEST_CASE("the depth guard raises a resource error naming the path") {
    ProgramAst ast = parse_program(
        "int f(int x) {\n"
        "    while (x > -100) {\n"
        "        x = x - 1;\n"
        "        x = x + 1;\n"
        "    }\n"
        "    return 0;\n"
        "}\n");
    ExecOptions o = opts8();
    o.max_depth = 16;
    bool threw = false;
    try {
        explore(ast, {}, o);
    } catch (const ResourceLimitError& e) {
        threw = true;
        CHECK(std::string(e.what()).find("T2") != std::string::npos);
    }
    CHECK(threw);
}

// ---- contract application ----

namespace {

const char* kCallerSource =
    "requires 0 <= i && i < N\n"
    "ensures i <= result && result < N\n"
    "     && forall j in [i, N): t[result] <= t[j]\n"
    "int find_min(int[N] t, int i);\n"
    "\n"
    "int caller(int[N] t) {\n"
    "    int m = find_min(t, 0);\n"
    "    return m;\n"
    "}\n";

}  // namespace

TEST_CASE("contract application posts bounds and element inequalities over fresh versions") {
    ProgramAst ast = substitute_params(parse_program(kCallerSource), {{"N", 8}});
    Executor ex(ast, {}, opts8());
    Configuration cfg = ex.initial();
    std::vector<Configuration> succ = ex.step(cfg);
    REQUIRE(succ.size() == 1);
    const ConstraintStore& st = succ.front().store;
    REQUIRE(st.size() == 10);  // 0 <= m, m < 8, and eight element comparisons
    CHECK(to_string(st.at(0)) == "0 <= m^0");
    CHECK(to_string(st.at(1)) == "m^0 < 8");
    for (int j = 0; j < 8; ++j)
        CHECK(to_string(st.at(static_cast<size_t>(2 + j))) ==
              "t^0[m^0] <= t^0[" + std::to_string(j) + "]");
    // the call-result target takes version 0, like any first write
    CHECK(succ.front().sigma.version("m") == 0);
}

TEST_CASE("the larger instance posts one inequality per cell") {
    ProgramAst ast = substitute_params(parse_program(kCallerSource), {{"N", 40}});
    Executor ex(ast, {}, opts8());
    std::vector<Configuration> succ = ex.step(ex.initial());
    REQUIRE(succ.size() == 1);
    CHECK(succ.front().store.size() == 42);
}

TEST_CASE("a trivially true precondition always passes") {
    ProgramAst ast = substitute_params(parse_program("ensures result == 1\n"
                                                     "int one();\n"
                                                     "int caller(int x) {\n"
                                                     "    int r = one();\n"
                                                     "    return r;\n"
                                                     "}\n"),
                                       {});
    Executor ex(ast, {}, opts8());
    std::vector<Configuration> succ = ex.step(ex.initial());
    REQUIRE(succ.size() == 1);
    CHECK(to_string(succ.front().store.at(0)) == "r^0 = 1");
}

TEST_CASE("a free argument violating the callee precondition is reported with a witness") {
    ProgramAst ast = substitute_params(parse_program("requires x > 0\n"
                                                     "ensures result == x\n"
                                                     "int id(int x);\n"
                                                     "int caller(int y) {\n"
                                                     "    int r = id(y);\n"
                                                     "    return r;\n"
                                                     "}\n"),
                                       {});
    VerificationReport rep = explore(ast, {}, opts8());
    CHECK(rep.verdict == ExecVerdict::ContractViolation);
    REQUIRE(rep.violation);
    CHECK(rep.violation->witness.scalars.at({"y", 0}) <= 0);
}

TEST_CASE("modified arrays get fresh versions, unmodified state is framed") {
    ProgramAst ast = substitute_params(parse_program(
        "modifies a\n"
        "ensures a[0] == 1\n"
        "int touch(int[2] a, int[2] b);\n"
        "int caller(int[2] a, int[2] b) {\n"
        "    int r = touch(a, b);\n"
        "    assert(b[0] == b[0]);\n"
        "    return r;\n"
        "}\n"), {});
    Executor ex(ast, {}, opts8());
    std::vector<Configuration> succ = ex.step(ex.initial());
    REQUIRE(succ.size() == 1);
    CHECK(succ.front().sigma.version("a") == 1);  // havocked
    CHECK(succ.front().sigma.version("b") == 0);  // framed
    CHECK(to_string(succ.front().store.at(0)) == "a^1[0] = 1");
}

// ---- overflow checking ----

TEST_CASE("a doubled variable overflows eight bits under a wide precondition") {
    ProgramAst ast = parse_program(
        "requires x >= 0 && x <= 100\n"
        "int f(int x) {\n"
        "    int y = x + x;\n"
        "    return y;\n"
        "}\n");
    ExecOptions o = opts8();
    o.check_overflow = true;
    VerificationReport rep = explore(ast, {}, o);
    CHECK(rep.verdict == ExecVerdict::OverflowViolation);
    REQUIRE(rep.violation);
    CHECK(rep.violation->witness.scalars.at({"x", 0}) >= 64);

    // without the flag the domain constraints silently prune instead
    VerificationReport quiet = explore(ast, {}, opts8());
    CHECK(quiet.verdict == ExecVerdict::PartiallyCorrect);
}

TEST_CASE("a small bounded sum stays within range") {
    ProgramAst ast = parse_program(
        "requires x >= 0 && x <= 10\n"
        "int f(int x) {\n"
        "    int y = x + 1;\n"
        "    return y;\n"
        "}\n");
    ExecOptions o = opts8();
    o.check_overflow = true;
    CHECK(explore(ast, {}, o).verdict == ExecVerdict::PartiallyCorrect);
}

TEST_CASE("the boundary case overflows with the boundary witness") {
    ProgramAst ast = parse_program(
        "requires x >= 0 && x <= 127\n"
        "int f(int x) {\n"
        "    int y = x + 1;\n"
        "    return y;\n"
        "}\n");
    ExecOptions o = opts8();
    o.check_overflow = true;
    VerificationReport rep = explore(ast, {}, o);
    CHECK(rep.verdict == ExecVerdict::OverflowViolation);
    REQUIRE(rep.violation);
    CHECK(rep.violation->witness.scalars.at({"x", 0}) == 127);
}
