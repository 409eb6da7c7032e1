#include <catch2/catch_amalgamated.hpp>

#include "cpbpv/parser.hpp"
#include "cpbpv/renaming.hpp"
#include "test_support.hpp"

using namespace cpbpv;

namespace {

SConPtr random_small_con(testing::Rng& rng, int depth) {
    auto var = [&]() {
        static const char* names[3] = {"x", "y", "z"};
        return sc_var(names[rng.range(0, 2)], 0);
    };
    auto expr = [&]() -> SExprPtr {
        switch (rng.range(0, 3)) {
            case 0: return sc_const(rng.range(-2, 3));
            case 1: return var();
            case 2: return sc_bin(SExpr::Kind::Add, var(), var());
            default: return sc_bin(SExpr::Kind::Mul, var(), sc_const(rng.range(-2, 2)));
        }
    };
    if (depth == 0 || rng.chance(40)) {
        static const CmpOp ops[6] = {CmpOp::Eq, CmpOp::Ne, CmpOp::Lt,
                                     CmpOp::Le, CmpOp::Gt, CmpOp::Ge};
        return sc_cmp(ops[rng.range(0, 5)], expr(), expr());
    }
    switch (rng.range(0, 3)) {
        case 0: return sc_and(random_small_con(rng, depth - 1), random_small_con(rng, depth - 1));
        case 1: return sc_or(random_small_con(rng, depth - 1), random_small_con(rng, depth - 1));
        case 2:
            return sc_bin(SCon::Kind::Implies, random_small_con(rng, depth - 1),
                          random_small_con(rng, depth - 1));
        default: return sc_not(random_small_con(rng, depth - 1));
    }
}

bool quantifier_free(const SConPtr& c) {
    switch (c->kind) {
        case SCon::Kind::True:
        case SCon::Kind::False:
        case SCon::Kind::Cmp:
        case SCon::Kind::AllDiff: return true;
        case SCon::Kind::Not: return quantifier_free(c->a);
        default: return quantifier_free(c->a) && quantifier_free(c->b);
    }
}

}  // namespace

TEST_CASE("negation flips relational atoms") {
    SConPtr le = sc_cmp(CmpOp::Le, sc_var("x", 0), sc_var("y", 0));
    CHECK(to_string(negate(le)) == "x^0 > y^0");
    CHECK(to_string(negate(negate(le))) == "x^0 <= y^0");
}

TEST_CASE("negation of an implication keeps the antecedent") {
    SConPtr imp = sc_bin(SCon::Kind::Implies, sc_cmp(CmpOp::Eq, sc_var("a", 0), sc_const(1)),
                         sc_cmp(CmpOp::Eq, sc_var("b", 0), sc_const(2)));
    CHECK(to_string(negate(imp)) == "a^0 = 1 && b^0 != 2");
}

TEST_CASE("negated alldifferent is the some-pair-equal disjunction") {
    SConPtr neg = negate(sc_alldiff(VarRef{"t", 0}, 3));
    CHECK(to_string(neg) == "t^0[0] = t^0[1] || t^0[0] = t^0[2] || t^0[1] = t^0[2]");
}

TEST_CASE("negation complements the model set exactly") {
    testing::Rng rng(0xD1CE);
    testing::Universe u;
    u.scalars = {{{"x", 0}, {-1, 2}}, {{"y", 0}, {-1, 2}}, {{"z", 0}, {0, 1}}};
    for (int round = 0; round < 400; ++round) {
        SConPtr c = random_small_con(rng, 2);
        SConPtr n = negate(c);
        CHECK(quantifier_free(n));
        testing::for_each_model(u, [&](const Model& m) {
            auto a = eval(c, m);
            auto b = eval(n, m);
            REQUIRE(a.has_value());  // division-free: always defined
            REQUIRE(b.has_value());
            CHECK(*a == !*b);
            return true;
        });
    }
}

TEST_CASE("nnf leaves only conjunction, disjunction and atoms") {
    testing::Rng rng(0xF00);
    for (int round = 0; round < 200; ++round) {
        SConPtr n = nnf(random_small_con(rng, 3));
        struct W {
            static bool clean(const SConPtr& c) {
                switch (c->kind) {
                    case SCon::Kind::Not:
                    case SCon::Kind::Implies: return false;
                    case SCon::Kind::And:
                    case SCon::Kind::Or: return clean(c->a) && clean(c->b);
                    default: return true;
                }
            }
        };
        CHECK(W::clean(n));
    }
}

// ---- quantifier expansion ----

namespace {

RenameEnv env8() {
    VersionMap sigma(std::set<std::string>{"t", "v", "result"});
    return RenameEnv::from_sigma(sigma, {"v", "result"}, {{"t", 8}});
}

}  // namespace

TEST_CASE("the sortedness precondition expands to seven chained comparisons") {
    BoolPtr pre = mk_quant(true, "i", mk_int(0), mk_int(7),
                           mk_cmp(CmpOp::Le, mk_read("t", mk_var("i")),
                                  mk_read("t", mk_bin(Expr::Kind::Add, mk_var("i"), mk_int(1)))));
    SConPtr c = expand_quantifiers(env8(), pre);
    std::vector<SConPtr> parts;
    flatten_conjuncts(c, parts);
    REQUIRE(parts.size() == 7);
    CHECK(to_string(parts.front()) == "t^0[0] <= t^0[1]");
    CHECK(to_string(parts.back()) == "t^0[6] <= t^0[7]");
}

TEST_CASE("an empty range is vacuous") {
    BoolPtr pre = mk_quant(true, "i", mk_int(0), mk_int(0),
                           mk_cmp(CmpOp::Eq, mk_var("i"), mk_int(0)));
    CHECK(expand_quantifiers(env8(), pre)->kind == SCon::Kind::True);
    BoolPtr ex = mk_quant(false, "i", mk_int(0), mk_int(0),
                          mk_cmp(CmpOp::Eq, mk_var("i"), mk_int(0)));
    CHECK(expand_quantifiers(env8(), ex)->kind == SCon::Kind::False);
}

TEST_CASE("existential expansion enumerates the range") {
    BoolPtr ex = mk_quant(false, "i", mk_int(0), mk_int(2),
                          mk_cmp(CmpOp::Eq, mk_read("t", mk_var("i")), mk_var("v")));
    SConPtr c = expand_quantifiers(env8(), ex);
    CHECK(to_string(c) == "t^0[0] = v^0 || t^0[1] = v^0");

    // enumeration oracle: over every model, the disjunction agrees with
    // "exists i in [0,2): t[i] = v"
    testing::Universe u;
    u.scalars = {{{"v", 0}, {0, 2}}};
    u.arrays = {{{"t", 0}, {0, 2}}};
    u.array_len[{"t", 0}] = 8;
    testing::for_each_model(u, [&](const Model& m) {
        bool expect = false;
        for (i64 i = 0; i < 2; ++i)
            expect = expect || m.arrays.at({"t", 0})[static_cast<size_t>(i)] == m.scalars.at({"v", 0});
        auto got = eval(c, m);
        REQUIRE(got.has_value());
        CHECK(*got == expect);
        return true;
    });
}

TEST_CASE("alldifferent becomes a global constraint over the current version") {
    SConPtr c = expand_quantifiers(env8(), mk_alldifferent("t"));
    REQUIRE(c->kind == SCon::Kind::AllDiff);
    CHECK(c->array == VarRef{"t", 0});
    CHECK(c->length == 8);
}

TEST_CASE("expansion output contains no quantifier nodes") {
    // expansion produces only the solver constraint grammar, checked by kind
    BoolPtr nested = mk_quant(
        true, "i", mk_int(0), mk_int(3),
        mk_quant(false, "j", mk_var("i"), mk_int(3),
                 mk_cmp(CmpOp::Le, mk_read("t", mk_var("i")), mk_read("t", mk_var("j")))));
    SConPtr c = expand_quantifiers(env8(), nested);
    CHECK(quantifier_free(c));  // SCon has no quantifier kind at all; sanity walk
}

TEST_CASE("non-literal bounds expand over a guarded envelope") {
    RenameEnv env = env8();
    env.scalars["i"] = sc_var("i", 0);
    env.hull = [](const SExprPtr&) { return std::make_pair<i64, i64>(0, 4); };
    BoolPtr q = mk_quant(true, "j", mk_var("i"), mk_int(4),
                         mk_cmp(CmpOp::Le, mk_read("t", mk_var("j")), mk_var("v")));
    SConPtr c = expand_quantifiers(env, q);
    // every instance is guarded by the real range test
    std::vector<SConPtr> parts;
    flatten_conjuncts(c, parts);
    REQUIRE(parts.size() == 4);
    CHECK(to_string(parts[1]) == "i^0 > 1 || t^0[1] <= v^0");

    // semantics against direct evaluation
    testing::Universe u;
    u.scalars = {{{"i", 0}, {0, 3}}, {{"v", 0}, {0, 1}}};
    u.arrays = {{{"t", 0}, {0, 1}}};
    u.array_len[{"t", 0}] = 8;
    testing::for_each_model(u, [&](const Model& m) {
        bool expect = true;
        for (i64 j = m.scalars.at({"i", 0}); j < 4; ++j)
            expect = expect &&
                     m.arrays.at({"t", 0})[static_cast<size_t>(j)] <= m.scalars.at({"v", 0});
        auto got = eval(c, m);
        REQUIRE(got.has_value());
        CHECK(*got == expect);
        return true;
    });
}

TEST_CASE("oversized quantifier ranges are rejected") {
    RenameEnv env = env8();
    env.max_quantifier_instances = 4;
    BoolPtr q = mk_quant(true, "i", mk_int(0), mk_int(100),
                         mk_cmp(CmpOp::Ge, mk_var("i"), mk_int(0)));
    CHECK_THROWS_AS(expand_quantifiers(env, q), VerifyError);
}
