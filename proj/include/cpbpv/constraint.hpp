#pragma once

#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "cpbpv/ast.hpp"

namespace cpbpv {

// Constraints over versioned solver variables. Every variable occurrence
// carries an explicit version; array reads may be indexed by arbitrary solver
// expressions (the element form).

struct VarRef {
    std::string name;
    int version = 0;

    bool operator==(const VarRef& o) const { return version == o.version && name == o.name; }
    bool operator<(const VarRef& o) const {
        return name != o.name ? name < o.name : version < o.version;
    }
};

inline std::string to_string(const VarRef& v) {
    return v.name + "^" + std::to_string(v.version);
}

struct SExpr;
using SExprPtr = std::shared_ptr<const SExpr>;

struct SExpr {
    enum class Kind { Const, Var, Cell, Add, Sub, Mul, Div };
    Kind kind;
    i64 value = 0;   // Const
    VarRef var;      // Var; Cell array ref
    SExprPtr a, b;   // binary operands; Cell index in a

    bool is_const() const { return kind == Kind::Const; }
};

inline SExprPtr sc_const(i64 v) {
    auto e = std::make_shared<SExpr>();
    e->kind = SExpr::Kind::Const;
    e->value = v;
    return e;
}

inline SExprPtr sc_var(VarRef v) {
    auto e = std::make_shared<SExpr>();
    e->kind = SExpr::Kind::Var;
    e->var = std::move(v);
    return e;
}

inline SExprPtr sc_var(const std::string& name, int version) {
    return sc_var(VarRef{name, version});
}

inline SExprPtr sc_cell(VarRef array, SExprPtr index) {
    auto e = std::make_shared<SExpr>();
    e->kind = SExpr::Kind::Cell;
    e->var = std::move(array);
    e->a = std::move(index);
    return e;
}

inline SExprPtr sc_bin(SExpr::Kind k, SExprPtr a, SExprPtr b) {
    auto e = std::make_shared<SExpr>();
    e->kind = k;
    e->a = std::move(a);
    e->b = std::move(b);
    return e;
}

/// Folding binary constructor: collapses literal operands using exact checked
/// arithmetic (division truncates toward zero; division by zero stays
/// symbolic so the solver can prune it as unsupported).
inline SExprPtr sc_bin_fold(SExpr::Kind k, SExprPtr a, SExprPtr b) {
    if (a->is_const() && b->is_const()) {
        std::optional<i64> r;
        switch (k) {
            case SExpr::Kind::Add: r = checked_add(a->value, b->value); break;
            case SExpr::Kind::Sub: r = checked_sub(a->value, b->value); break;
            case SExpr::Kind::Mul: r = checked_mul(a->value, b->value); break;
            case SExpr::Kind::Div: r = checked_div(a->value, b->value); break;
            default: break;
        }
        if (r) return sc_const(*r);
    }
    return sc_bin(k, std::move(a), std::move(b));
}

struct SCon;
using SConPtr = std::shared_ptr<const SCon>;

struct SCon {
    enum class Kind { True, False, Cmp, Not, And, Or, Implies, AllDiff };
    Kind kind;
    CmpOp op = CmpOp::Eq;  // Cmp
    SExprPtr e1, e2;       // Cmp
    SConPtr a, b;          // Not(a); And/Or/Implies(a,b)
    VarRef array;          // AllDiff
    i64 length = 0;        // AllDiff: cells [0, length)
};

inline SConPtr sc_bool(bool v) {
    auto c = std::make_shared<SCon>();
    c->kind = v ? SCon::Kind::True : SCon::Kind::False;
    return c;
}

inline SConPtr sc_cmp(CmpOp op, SExprPtr a, SExprPtr b) {
    auto c = std::make_shared<SCon>();
    c->kind = SCon::Kind::Cmp;
    c->op = op;
    c->e1 = std::move(a);
    c->e2 = std::move(b);
    return c;
}

/// Folding comparison: literal operands collapse to true/false.
inline SConPtr sc_cmp_fold(CmpOp op, SExprPtr a, SExprPtr b) {
    if (a->is_const() && b->is_const()) return sc_bool(eval_cmp(op, a->value, b->value));
    return sc_cmp(op, std::move(a), std::move(b));
}

inline SConPtr sc_not(SConPtr a) {
    auto c = std::make_shared<SCon>();
    c->kind = SCon::Kind::Not;
    c->a = std::move(a);
    return c;
}

inline SConPtr sc_bin(SCon::Kind k, SConPtr a, SConPtr b) {
    auto c = std::make_shared<SCon>();
    c->kind = k;
    c->a = std::move(a);
    c->b = std::move(b);
    return c;
}

inline SConPtr sc_and(SConPtr a, SConPtr b) { return sc_bin(SCon::Kind::And, std::move(a), std::move(b)); }
inline SConPtr sc_or(SConPtr a, SConPtr b) { return sc_bin(SCon::Kind::Or, std::move(a), std::move(b)); }

/// Folding connectives: units and absorbing elements simplify away.
inline SConPtr sc_and_fold(SConPtr a, SConPtr b) {
    if (a->kind == SCon::Kind::False || b->kind == SCon::Kind::False) return sc_bool(false);
    if (a->kind == SCon::Kind::True) return b;
    if (b->kind == SCon::Kind::True) return a;
    return sc_and(std::move(a), std::move(b));
}

inline SConPtr sc_or_fold(SConPtr a, SConPtr b) {
    if (a->kind == SCon::Kind::True || b->kind == SCon::Kind::True) return sc_bool(true);
    if (a->kind == SCon::Kind::False) return b;
    if (b->kind == SCon::Kind::False) return a;
    return sc_or(std::move(a), std::move(b));
}

inline SConPtr sc_implies_fold(SConPtr a, SConPtr b) {
    if (a->kind == SCon::Kind::False || b->kind == SCon::Kind::True) return sc_bool(true);
    if (a->kind == SCon::Kind::True) return b;
    // !b handled by negate() at use sites; keep the implication node readable
    return sc_bin(SCon::Kind::Implies, std::move(a), std::move(b));
}

inline SConPtr sc_alldiff(VarRef array, i64 length) {
    auto c = std::make_shared<SCon>();
    c->kind = SCon::Kind::AllDiff;
    c->array = std::move(array);
    c->length = length;
    return c;
}

// ---- negation-normal form ----

inline SConPtr negate(const SConPtr& c);

/// Pushes Not/Implies inward so only And/Or/Cmp/AllDiff/True/False remain.
inline SConPtr nnf(const SConPtr& c) {
    switch (c->kind) {
        case SCon::Kind::True:
        case SCon::Kind::False:
        case SCon::Kind::Cmp:
        case SCon::Kind::AllDiff: return c;
        case SCon::Kind::Not: return negate(c->a);
        case SCon::Kind::And: return sc_and_fold(nnf(c->a), nnf(c->b));
        case SCon::Kind::Or: return sc_or_fold(nnf(c->a), nnf(c->b));
        case SCon::Kind::Implies: return sc_or_fold(negate(c->a), nnf(c->b));
    }
    return c;
}

/// Logical complement in negation-normal form. Relational atoms flip;
/// the complement of alldifferent is the some-pair-equal disjunction.
inline SConPtr negate(const SConPtr& c) {
    switch (c->kind) {
        case SCon::Kind::True: return sc_bool(false);
        case SCon::Kind::False: return sc_bool(true);
        case SCon::Kind::Cmp: return sc_cmp(flip_cmp(c->op), c->e1, c->e2);
        case SCon::Kind::Not: return nnf(c->a);
        case SCon::Kind::And: return sc_or_fold(negate(c->a), negate(c->b));
        case SCon::Kind::Or: return sc_and_fold(negate(c->a), negate(c->b));
        case SCon::Kind::Implies: return sc_and_fold(nnf(c->a), negate(c->b));
        case SCon::Kind::AllDiff: {
            SConPtr out = sc_bool(false);
            for (i64 i = 0; i < c->length; ++i)
                for (i64 j = i + 1; j < c->length; ++j)
                    out = sc_or_fold(out, sc_cmp(CmpOp::Eq, sc_cell(c->array, sc_const(i)),
                                                 sc_cell(c->array, sc_const(j))));
            return out;
        }
    }
    return c;
}

/// Splits top-level conjunctions into individual constraints.
inline void flatten_conjuncts(const SConPtr& c, std::vector<SConPtr>& out) {
    if (c->kind == SCon::Kind::And) {
        flatten_conjuncts(c->a, out);
        flatten_conjuncts(c->b, out);
    } else {
        out.push_back(c);
    }
}

// ---- printing ----

namespace detail {

inline int sexpr_prec(SExpr::Kind k) {
    switch (k) {
        case SExpr::Kind::Add:
        case SExpr::Kind::Sub: return 1;
        case SExpr::Kind::Mul:
        case SExpr::Kind::Div: return 2;
        default: return 3;
    }
}

inline void print_sexpr(std::ostream& os, const SExprPtr& e, int parent = 0) {
    int prec = sexpr_prec(e->kind);
    switch (e->kind) {
        case SExpr::Kind::Const: os << e->value; return;
        case SExpr::Kind::Var: os << to_string(e->var); return;
        case SExpr::Kind::Cell:
            os << to_string(e->var) << "[";
            print_sexpr(os, e->a);
            os << "]";
            return;
        default: break;
    }
    bool paren = prec < parent;
    if (paren) os << "(";
    const char* op = e->kind == SExpr::Kind::Add   ? " + "
                     : e->kind == SExpr::Kind::Sub ? " - "
                     : e->kind == SExpr::Kind::Mul ? " * "
                                                   : " / ";
    print_sexpr(os, e->a, prec);
    os << op;
    print_sexpr(os, e->b, prec + 1);
    if (paren) os << ")";
}

inline int scon_prec(SCon::Kind k) {
    switch (k) {
        case SCon::Kind::Implies: return 1;
        case SCon::Kind::Or: return 2;
        case SCon::Kind::And: return 3;
        case SCon::Kind::Not: return 4;
        default: return 5;
    }
}

inline void print_scon(std::ostream& os, const SConPtr& c, int parent = 0) {
    int prec = scon_prec(c->kind);
    switch (c->kind) {
        case SCon::Kind::True: os << "true"; return;
        case SCon::Kind::False: os << "false"; return;
        case SCon::Kind::Cmp:
            print_sexpr(os, c->e1);
            os << " " << (c->op == CmpOp::Eq ? "=" : to_string(c->op)) << " ";
            print_sexpr(os, c->e2);
            return;
        case SCon::Kind::AllDiff: os << "alldifferent(" << to_string(c->array) << ")"; return;
        case SCon::Kind::Not:
            os << "!";
            print_scon(os, c->a, 5);
            return;
        default: break;
    }
    bool paren = prec < parent;
    if (paren) os << "(";
    const char* op = c->kind == SCon::Kind::And  ? " && "
                     : c->kind == SCon::Kind::Or ? " || "
                                                 : " ==> ";
    if (c->kind == SCon::Kind::Implies) {
        print_scon(os, c->a, prec + 1);
        os << op;
        print_scon(os, c->b, prec);
    } else {
        print_scon(os, c->a, prec);
        os << op;
        print_scon(os, c->b, prec + 1);
    }
    if (paren) os << ")";
}

}  // namespace detail

inline std::string to_string(const SExprPtr& e) {
    std::ostringstream os;
    detail::print_sexpr(os, e);
    return os.str();
}

inline std::string to_string(const SConPtr& c) {
    std::ostringstream os;
    detail::print_scon(os, c);
    return os.str();
}

// structural equality, used by tests
inline bool equal(const SExprPtr& a, const SExprPtr& b) {
    if (!a || !b) return !a && !b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case SExpr::Kind::Const: return a->value == b->value;
        case SExpr::Kind::Var: return a->var == b->var;
        case SExpr::Kind::Cell: return a->var == b->var && equal(a->a, b->a);
        default: return equal(a->a, b->a) && equal(a->b, b->b);
    }
}

inline bool equal(const SConPtr& a, const SConPtr& b) {
    if (!a || !b) return !a && !b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case SCon::Kind::True:
        case SCon::Kind::False: return true;
        case SCon::Kind::Cmp: return a->op == b->op && equal(a->e1, b->e1) && equal(a->e2, b->e2);
        case SCon::Kind::Not: return equal(a->a, b->a);
        case SCon::Kind::AllDiff: return a->array == b->array && a->length == b->length;
        default: return equal(a->a, b->a) && equal(a->b, b->b);
    }
}

}  // namespace cpbpv
