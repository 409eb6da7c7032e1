#include <catch2/catch_amalgamated.hpp>

#include "cpbpv/cheap_solver.hpp"
#include "cpbpv/solver.hpp"
#include "test_support.hpp"

using namespace cpbpv;

namespace {

std::vector<SConPtr> sorted_chain(int n) {  // t^0 ascending
    std::vector<SConPtr> out;
    for (int i = 0; i + 1 < n; ++i)
        out.push_back(sc_cmp(CmpOp::Le, sc_cell(VarRef{"t", 0}, sc_const(i)),
                             sc_cell(VarRef{"t", 0}, sc_const(i + 1))));
    return out;
}

}  // namespace

TEST_CASE("an empty interval is definitely unsatisfiable") {
    std::vector<SConPtr> store{sc_cmp(CmpOp::Ge, sc_var("x", 0), sc_const(5)),
                               sc_cmp(CmpOp::Le, sc_var("x", 0), sc_const(3))};
    CHECK(check_cheap_store(store, 8) == CheapVerdict::Unsat);
}

TEST_CASE("nonlinear atoms are abstracted to true") {
    std::vector<SConPtr> store{
        sc_cmp(CmpOp::Eq, sc_bin(SExpr::Kind::Mul, sc_var("x", 0), sc_var("x", 0)), sc_const(2))};
    CHECK(check_cheap_store(store, 8) == CheapVerdict::Unknown);  // x*x = 2 has no model
}

TEST_CASE("the inconsistent probed store is refuted through the sortedness chain") {
    // sorted t, t[3] != v, t[3] <= v, t[1] = v
    std::vector<SConPtr> store = sorted_chain(8);
    VarRef t{"t", 0};
    store.push_back(sc_cmp(CmpOp::Ne, sc_cell(t, sc_const(3)), sc_var("v", 0)));
    store.push_back(sc_cmp(CmpOp::Le, sc_cell(t, sc_const(3)), sc_var("v", 0)));
    store.push_back(sc_cmp(CmpOp::Eq, sc_cell(t, sc_const(1)), sc_var("v", 0)));
    CHECK(check_cheap_store(store, 8) == CheapVerdict::Unsat);
}

TEST_CASE("a strict ordering cycle is refuted without search") {
    std::vector<SConPtr> store{sc_cmp(CmpOp::Le, sc_var("x", 0), sc_var("y", 0)),
                               sc_cmp(CmpOp::Le, sc_var("y", 0), sc_var("z", 0)),
                               sc_cmp(CmpOp::Lt, sc_var("z", 0), sc_var("x", 0))};
    CHECK(check_cheap_store(store, 31) == CheapVerdict::Unsat);
}

TEST_CASE("identical linear forms with disjoint bounds conflict") {
    auto sum = sc_bin(SExpr::Kind::Add, sc_var("i", 0), sc_var("j", 0));
    std::vector<SConPtr> store{sc_cmp(CmpOp::Gt, sum, sc_var("k", 0)),
                               sc_cmp(CmpOp::Le, sum, sc_var("k", 0))};
    CHECK(check_cheap_store(store, 8) == CheapVerdict::Unsat);
}

TEST_CASE("disjunctions are abstracted, not decided") {
    std::vector<SConPtr> store{
        sc_or(sc_cmp(CmpOp::Eq, sc_var("x", 0), sc_const(1)),
              sc_cmp(CmpOp::Eq, sc_var("x", 0), sc_const(2))),
        sc_cmp(CmpOp::Eq, sc_var("x", 0), sc_const(9))};
    // unsatisfiable, but only by case analysis: the cheap layer cannot tell
    CHECK(check_cheap_store(store, 8) == CheapVerdict::Unknown);
}

TEST_CASE("the cheap layer never refutes a satisfiable store") {
    testing::Rng rng(0xAB1E);
    int checked = 0;
    for (int round = 0; round < 300; ++round) {
        testing::RandomStore rs = testing::random_store(rng, 8);
        bool sat = testing::enumeration_sat(rs.universe, rs.constraints);
        CheapVerdict v = check_cheap_store(rs.constraints, 8);
        if (sat) {
            CHECK(v == CheapVerdict::Unknown);
            ++checked;
        }
    }
    CHECK(checked > 50);  // the corpus actually exercises the property
}
