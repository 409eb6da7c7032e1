#include <catch2/catch_amalgamated.hpp>

#include "cpbpv/solver.hpp"
#include "cpbpv/store.hpp"
#include "test_support.hpp"

using namespace cpbpv;

TEST_CASE("posting extends the conjunction in order") {
    ConstraintStore s;
    s.post(sc_cmp(CmpOp::Eq, sc_var("l", 0), sc_const(0)));
    s.post(sc_cmp(CmpOp::Eq, sc_var("u", 0), sc_const(7)));
    REQUIRE(s.size() == 2);
    CHECK(to_string(s.at(0)) == "l^0 = 0");
    CHECK(to_string(s.at(1)) == "u^0 = 7");
    CHECK(s.to_text() == "l^0 = 0\nu^0 = 7\n");
}

TEST_CASE("posting true changes nothing about satisfiability") {
    ConstraintStore s;
    s.post(sc_cmp(CmpOp::Eq, sc_var("x", 0), sc_const(1)));
    SolverConfig cfg;
    SolverStats st;
    Verdict before = check_complete(s.view(), cfg, st);
    s.post(sc_bool(true));
    Verdict after = check_complete(s.view(), cfg, st);
    CHECK(before.sat() == after.sat());
}

TEST_CASE("checkpoint, post, rollback restores the exact prefix") {
    ConstraintStore s;
    s.post(sc_cmp(CmpOp::Ge, sc_var("x", 0), sc_const(0)));
    std::string before = s.to_text();
    s.checkpoint();
    s.post(sc_cmp(CmpOp::Eq, sc_var("x", 0), sc_const(1)));
    s.rollback();
    CHECK(s.to_text() == before);
    CHECK_THROWS_AS(s.rollback(), VerifyError);
}

TEST_CASE("checkpoint discipline is observationally the identity") {
    testing::Rng rng(0x57033);
    for (int round = 0; round < 100; ++round) {
        ConstraintStore s;
        int prefix = static_cast<int>(rng.range(0, 5));
        for (int i = 0; i < prefix; ++i)
            s.post(sc_cmp(CmpOp::Le, sc_var("x", static_cast<int>(i)), sc_const(rng.range(-5, 5))));
        std::string snapshot = s.to_text();
        // nested checkpoints with posts in between
        int depth = static_cast<int>(rng.range(1, 3));
        for (int d = 0; d < depth; ++d) {
            s.checkpoint();
            int posts = static_cast<int>(rng.range(0, 4));
            for (int i = 0; i < posts; ++i)
                s.post(sc_cmp(CmpOp::Ge, sc_var("y", i), sc_const(rng.range(-5, 5))));
        }
        for (int d = 0; d < depth; ++d) s.rollback();
        CHECK(s.to_text() == snapshot);
    }
}

TEST_CASE("explicit marks roll back past inner checkpoints") {
    ConstraintStore s;
    s.post(sc_bool(true));
    size_t mark = s.mark();
    s.checkpoint();
    s.post(sc_bool(true));
    s.post(sc_bool(true));
    s.rollback_to(mark);
    CHECK(s.size() == 1);
    CHECK_THROWS_AS(s.rollback_to(99), VerifyError);
}

TEST_CASE("serialization is one constraint per line with stable operators") {
    ConstraintStore s;
    s.post(sc_cmp(CmpOp::Ne, sc_cell(VarRef{"t", 0}, sc_const(3)), sc_var("v", 0)));
    s.post(sc_alldiff(VarRef{"t", 0}, 8));
    s.post(sc_bin(SCon::Kind::Implies, sc_cmp(CmpOp::Ne, sc_var("i", 0), sc_const(1)),
                  sc_cmp(CmpOp::Eq, sc_cell(VarRef{"a", 1}, sc_const(1)),
                         sc_cell(VarRef{"a", 0}, sc_const(1)))));
    CHECK(s.to_text() ==
          "t^0[3] != v^0\n"
          "alldifferent(t^0)\n"
          "i^0 != 1 ==> a^1[1] = a^0[1]\n");
}
