#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>

#include "cpbpv/ast.hpp"
#include "cpbpv/constraint.hpp"

namespace cpbpv {

/// Version numbers for program variables and arrays. Value semantics: bump()
/// returns an updated copy, so sibling execution branches never observe each
/// other's counters. Identifiers outside the declared universe are rejected.
class VersionMap {
public:
    VersionMap() : universe_(std::make_shared<std::set<std::string>>()) {}

    explicit VersionMap(std::set<std::string> universe)
        : universe_(std::make_shared<std::set<std::string>>(std::move(universe))) {}

    int version(const std::string& x) const {
        require_known(x);
        auto it = versions_.find(x);
        return it == versions_.end() ? 0 : it->second;
    }

    VersionMap bump(const std::string& x) const {
        require_known(x);
        VersionMap out = *this;
        out.versions_[x] = version(x) + 1;
        return out;
    }

    bool knows(const std::string& x) const { return universe_->count(x) > 0; }

    VarRef ref(const std::string& x) const { return VarRef{x, version(x)}; }

private:
    void require_known(const std::string& x) const {
        if (!universe_->count(x)) throw VerifyError("unknown identifier '" + x + "'");
    }

    std::shared_ptr<const std::set<std::string>> universe_;
    std::map<std::string, int> versions_;
};

/// Values learned from equality constraints already posted on the current
/// path; lets the renamer fold expressions over fixed variables and cells.
struct ConstBindings {
    std::map<VarRef, i64> scalars;
    std::map<std::pair<VarRef, i64>, i64> cells;

    std::optional<i64> scalar(const VarRef& v) const {
        auto it = scalars.find(v);
        return it == scalars.end() ? std::nullopt : std::optional<i64>(it->second);
    }
    std::optional<i64> cell(const VarRef& a, i64 idx) const {
        auto it = cells.find({a, idx});
        return it == cells.end() ? std::nullopt : std::optional<i64>(it->second);
    }
};

/// Environment for turning program/spec expressions into solver constraints.
/// Scalar identifiers map to solver expressions (the common case is
/// x -> x^sigma(x), but contract substitution injects actual-argument
/// expressions and the result target); array identifiers map to a versioned
/// solver array.
struct RenameEnv {
    std::map<std::string, SExprPtr> scalars;
    std::map<std::string, VarRef> arrays;
    std::map<std::string, i64> array_lengths;   // by *source* array name
    const ConstBindings* consts = nullptr;      // optional
    bool fold = true;
    // Sound enclosure of an expression's value over the current constraint
    // store; used to expand quantifier ranges whose bounds are not literal.
    std::function<std::pair<i64, i64>(const SExprPtr&)> hull;
    i64 max_quantifier_instances = 4096;

    static RenameEnv from_sigma(const VersionMap& sigma, const std::vector<std::string>& scalars,
                                const std::map<std::string, i64>& lengths,
                                const ConstBindings* consts = nullptr, bool fold = true) {
        RenameEnv env;
        for (const auto& x : scalars) env.scalars[x] = sc_var(sigma.ref(x));
        for (const auto& [a, n] : lengths) {
            env.arrays[a] = sigma.ref(a);
            env.array_lengths[a] = n;
        }
        env.consts = consts;
        env.fold = fold;
        return env;
    }
};

namespace detail {

inline SExprPtr rename_expr_env(const RenameEnv& env, const ExprPtr& e) {
    switch (e->kind) {
        case Expr::Kind::IntLit: return sc_const(e->value);
        case Expr::Kind::Var: {
            auto it = env.scalars.find(e->name);
            if (it == env.scalars.end()) throw VerifyError("unknown identifier '" + e->name + "'");
            SExprPtr se = it->second;
            if (env.fold && env.consts && se->kind == SExpr::Kind::Var) {
                if (auto v = env.consts->scalar(se->var)) return sc_const(*v);
            }
            return se;
        }
        case Expr::Kind::ArrayRead: {
            auto it = env.arrays.find(e->name);
            if (it == env.arrays.end()) throw VerifyError("unknown array '" + e->name + "'");
            SExprPtr idx = rename_expr_env(env, e->lhs);
            if (env.fold && env.consts && idx->is_const()) {
                if (auto v = env.consts->cell(it->second, idx->value)) return sc_const(*v);
            }
            return sc_cell(it->second, std::move(idx));
        }
        default: {
            SExprPtr a = rename_expr_env(env, e->lhs);
            SExprPtr b = rename_expr_env(env, e->rhs);
            auto k = e->kind == Expr::Kind::Add   ? SExpr::Kind::Add
                     : e->kind == Expr::Kind::Sub ? SExpr::Kind::Sub
                     : e->kind == Expr::Kind::Mul ? SExpr::Kind::Mul
                                                  : SExpr::Kind::Div;
            return env.fold ? sc_bin_fold(k, std::move(a), std::move(b))
                            : sc_bin(k, std::move(a), std::move(b));
        }
    }
}

inline SConPtr rename_bool_env(const RenameEnv& env, const BoolPtr& b, bool allow_quantifiers);

inline SConPtr expand_quantifier(const RenameEnv& env, const BoolPtr& b) {
    bool universal = b->kind == BoolExpr::Kind::Forall;
    SExprPtr lo = rename_expr_env(env, b->e1);
    SExprPtr hi = rename_expr_env(env, b->e2);

    // Envelope of instance indices. Literal bounds expand directly; otherwise
    // use the store-derived hull and guard each instance with the actual range
    // test so out-of-range instances are vacuous.
    i64 env_lo, env_hi;  // inclusive/exclusive
    bool guarded = false;
    if (lo->is_const() && hi->is_const()) {
        env_lo = lo->value;
        env_hi = hi->value;
    } else {
        if (!env.hull)
            throw VerifyError("quantifier range is not concrete: [" + to_string(lo) + ", " +
                              to_string(hi) + ")");
        env_lo = env.hull(lo).first;
        env_hi = env.hull(hi).second;
        guarded = true;
    }
    if (env_hi - env_lo > env.max_quantifier_instances)
        throw VerifyError("quantifier range too large: [" + to_string(lo) + ", " + to_string(hi) +
                          ") spans " + std::to_string(env_hi - env_lo) + " instances");

    SConPtr acc = sc_bool(universal);
    for (i64 i = env_lo; i < env_hi; ++i) {
        RenameEnv inner = env;
        inner.scalars[b->name] = sc_const(i);
        SConPtr inst = rename_bool_env(inner, b->b1, true);
        if (guarded) {
            SConPtr in_range = sc_and_fold(sc_cmp_fold(CmpOp::Le, lo, sc_const(i)),
                                           sc_cmp_fold(CmpOp::Lt, sc_const(i), hi));
            if (universal)
                inst = sc_or_fold(negate(in_range), inst);
            else
                inst = sc_and_fold(in_range, inst);
        }
        acc = universal ? sc_and_fold(std::move(acc), std::move(inst))
                        : sc_or_fold(std::move(acc), std::move(inst));
    }
    return acc;
}

inline SConPtr rename_bool_env(const RenameEnv& env, const BoolPtr& b, bool allow_quantifiers) {
    switch (b->kind) {
        case BoolExpr::Kind::True: return sc_bool(true);
        case BoolExpr::Kind::False: return sc_bool(false);
        case BoolExpr::Kind::Cmp: {
            SExprPtr a = rename_expr_env(env, b->e1);
            SExprPtr c = rename_expr_env(env, b->e2);
            return env.fold ? sc_cmp_fold(b->op, std::move(a), std::move(c))
                            : sc_cmp(b->op, std::move(a), std::move(c));
        }
        case BoolExpr::Kind::Not: {
            SConPtr inner = rename_bool_env(env, b->b1, allow_quantifiers);
            return env.fold ? negate(inner) : sc_not(inner);
        }
        case BoolExpr::Kind::And:
        case BoolExpr::Kind::Or:
        case BoolExpr::Kind::Implies: {
            SConPtr x = rename_bool_env(env, b->b1, allow_quantifiers);
            SConPtr y = rename_bool_env(env, b->b2, allow_quantifiers);
            if (!env.fold)
                return sc_bin(b->kind == BoolExpr::Kind::And  ? SCon::Kind::And
                              : b->kind == BoolExpr::Kind::Or ? SCon::Kind::Or
                                                              : SCon::Kind::Implies,
                              std::move(x), std::move(y));
            switch (b->kind) {
                case BoolExpr::Kind::And: return sc_and_fold(std::move(x), std::move(y));
                case BoolExpr::Kind::Or: return sc_or_fold(std::move(x), std::move(y));
                default: return sc_implies_fold(std::move(x), std::move(y));
            }
        }
        case BoolExpr::Kind::Forall:
        case BoolExpr::Kind::Exists:
            if (!allow_quantifiers)
                throw VerifyError("quantifier not allowed here (expand it first)");
            return expand_quantifier(env, b);
        case BoolExpr::Kind::AllDifferent: {
            auto it = env.arrays.find(b->name);
            if (it == env.arrays.end()) throw VerifyError("unknown array '" + b->name + "'");
            auto ln = env.array_lengths.find(b->name);
            if (ln == env.array_lengths.end())
                throw VerifyError("no concrete length for array '" + b->name + "'");
            return sc_alldiff(it->second, ln->second);
        }
    }
    throw VerifyError("unreachable boolean form");
}

}  // namespace detail

/// sigma-renaming of a program integer expression: x becomes x^sigma(x),
/// a[e] becomes a^sigma(a)[rename(e)]. With fold=true, literal arithmetic is
/// collapsed and variables fixed by `consts` are replaced by their values.
inline SExprPtr rename_expr(const VersionMap& sigma, const ExprPtr& e,
                            const std::vector<std::string>& scalars,
                            const std::map<std::string, i64>& lengths = {},
                            const ConstBindings* consts = nullptr, bool fold = true) {
    return detail::rename_expr_env(RenameEnv::from_sigma(sigma, scalars, lengths, consts, fold), e);
}

/// sigma-renaming of a quantifier-free boolean expression (structure
/// preserving homomorphism over the connectives).
inline SConPtr rename_bool(const VersionMap& sigma, const BoolPtr& b,
                           const std::vector<std::string>& scalars,
                           const std::map<std::string, i64>& lengths = {},
                           const ConstBindings* consts = nullptr, bool fold = true) {
    return detail::rename_bool_env(RenameEnv::from_sigma(sigma, scalars, lengths, consts, fold), b,
                                   false);
}

/// Full specification renaming: bounded quantifiers become finite
/// conjunctions/disjunctions, alldifferent becomes a global constraint over
/// the array's current version, and the rest is renamed as rename_bool does.
inline SConPtr expand_quantifiers(const RenameEnv& env, const BoolPtr& spec) {
    return detail::rename_bool_env(env, spec, true);
}

}  // namespace cpbpv
