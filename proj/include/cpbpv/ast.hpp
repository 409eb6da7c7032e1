#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cpbpv/base.hpp"

namespace cpbpv {

// Program-level syntax. Integer expressions and boolean/spec expressions are
// separate grammars; statements mirror the instruction forms of the language
// (assignments, if/else, while, assert, enforce, return, block) plus the
// call-assignment used for contract-summarized callees.

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

inline const char* to_string(CmpOp op) {
    switch (op) {
        case CmpOp::Eq: return "==";
        case CmpOp::Ne: return "!=";
        case CmpOp::Lt: return "<";
        case CmpOp::Le: return "<=";
        case CmpOp::Gt: return ">";
        case CmpOp::Ge: return ">=";
    }
    return "?";
}

inline CmpOp flip_cmp(CmpOp op) {  // logical complement
    switch (op) {
        case CmpOp::Eq: return CmpOp::Ne;
        case CmpOp::Ne: return CmpOp::Eq;
        case CmpOp::Lt: return CmpOp::Ge;
        case CmpOp::Le: return CmpOp::Gt;
        case CmpOp::Gt: return CmpOp::Le;
        case CmpOp::Ge: return CmpOp::Lt;
    }
    return op;
}

inline bool eval_cmp(CmpOp op, i64 a, i64 b) {
    switch (op) {
        case CmpOp::Eq: return a == b;
        case CmpOp::Ne: return a != b;
        case CmpOp::Lt: return a < b;
        case CmpOp::Le: return a <= b;
        case CmpOp::Gt: return a > b;
        case CmpOp::Ge: return a >= b;
    }
    return false;
}

// ---- integer expressions ----

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { IntLit, Var, ArrayRead, Add, Sub, Mul, Div };
    Kind kind;
    SourcePos pos;
    i64 value = 0;        // IntLit
    std::string name;     // Var; ArrayRead array name
    ExprPtr lhs, rhs;     // binary ops; ArrayRead index in lhs
};

inline ExprPtr mk_int(i64 v, SourcePos p = {}) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::IntLit;
    e->value = v;
    e->pos = p;
    return e;
}

inline ExprPtr mk_var(std::string name, SourcePos p = {}) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Var;
    e->name = std::move(name);
    e->pos = p;
    return e;
}

inline ExprPtr mk_read(std::string array, ExprPtr index, SourcePos p = {}) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::ArrayRead;
    e->name = std::move(array);
    e->lhs = std::move(index);
    e->pos = p;
    return e;
}

inline ExprPtr mk_bin(Expr::Kind k, ExprPtr a, ExprPtr b, SourcePos p = {}) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    e->pos = p;
    return e;
}

// ---- boolean / specification expressions ----
// Forall/Exists (half-open ranges) and AllDifferent are contract-only forms.

struct BoolExpr;
using BoolPtr = std::shared_ptr<const BoolExpr>;

struct BoolExpr {
    enum class Kind { True, False, Cmp, Not, And, Or, Implies, Forall, Exists, AllDifferent };
    Kind kind;
    SourcePos pos;
    CmpOp op = CmpOp::Eq;  // Cmp
    ExprPtr e1, e2;        // Cmp; quantifier range [e1, e2)
    BoolPtr b1, b2;        // Not(b1); And/Or/Implies(b1,b2); quantifier body in b1
    std::string name;      // quantified variable / alldifferent array
};

inline BoolPtr mk_bool(bool v, SourcePos p = {}) {
    auto b = std::make_shared<BoolExpr>();
    b->kind = v ? BoolExpr::Kind::True : BoolExpr::Kind::False;
    b->pos = p;
    return b;
}

inline BoolPtr mk_cmp(CmpOp op, ExprPtr a, ExprPtr b2, SourcePos p = {}) {
    auto b = std::make_shared<BoolExpr>();
    b->kind = BoolExpr::Kind::Cmp;
    b->op = op;
    b->e1 = std::move(a);
    b->e2 = std::move(b2);
    b->pos = p;
    return b;
}

inline BoolPtr mk_not(BoolPtr a, SourcePos p = {}) {
    auto b = std::make_shared<BoolExpr>();
    b->kind = BoolExpr::Kind::Not;
    b->b1 = std::move(a);
    b->pos = p;
    return b;
}

inline BoolPtr mk_bool2(BoolExpr::Kind k, BoolPtr x, BoolPtr y, SourcePos p = {}) {
    auto b = std::make_shared<BoolExpr>();
    b->kind = k;
    b->b1 = std::move(x);
    b->b2 = std::move(y);
    b->pos = p;
    return b;
}

inline BoolPtr mk_quant(bool universal, std::string var, ExprPtr lo, ExprPtr hi, BoolPtr body,
                        SourcePos p = {}) {
    auto b = std::make_shared<BoolExpr>();
    b->kind = universal ? BoolExpr::Kind::Forall : BoolExpr::Kind::Exists;
    b->name = std::move(var);
    b->e1 = std::move(lo);
    b->e2 = std::move(hi);
    b->b1 = std::move(body);
    b->pos = p;
    return b;
}

inline BoolPtr mk_alldifferent(std::string array, SourcePos p = {}) {
    auto b = std::make_shared<BoolExpr>();
    b->kind = BoolExpr::Kind::AllDifferent;
    b->name = std::move(array);
    b->pos = p;
    return b;
}

// ---- statements ----

struct Instr;
using InstrPtr = std::shared_ptr<const Instr>;

struct Instr {
    enum class Kind { AssignScalar, AssignArray, If, While, Assert, Enforce, Return, Block, Call };
    Kind kind;
    SourcePos pos;
    bool is_decl = false;              // assignment introduced by `int x = ...`
    std::string target;                // AssignScalar/Call target; AssignArray array
    ExprPtr index;                     // AssignArray
    ExprPtr value;                     // assignments / Return
    BoolPtr cond;                      // If/While/Assert/Enforce
    InstrPtr then_branch, else_branch; // If; While body in then_branch
    std::vector<InstrPtr> body;        // Block
    std::string callee;                // Call
    std::vector<ExprPtr> args;         // Call
};

// ---- declarations ----

struct Param {
    std::string name;
    bool is_array = false;
    ExprPtr length;  // IntLit or Var (symbolic bound); null for scalars
    SourcePos pos;
};

/// Contract of a callee available for modular verification.
struct Contract {
    std::string name;
    std::vector<Param> params;
    BoolPtr precondition;   // never null (defaults to true)
    BoolPtr postcondition;  // never null
    std::vector<std::string> modifies;  // array formals the callee may write
    SourcePos header_pos;
};

struct ProgramAst {
    std::string name;
    std::vector<Param> params;
    BoolPtr precondition;
    BoolPtr postcondition;
    std::vector<InstrPtr> body;
    SourcePos header_pos;                 // anchor for trace line numbers
    std::vector<Contract> contracts;      // contract-only declarations in the same file
};

inline Contract contract_of(const ProgramAst& p) {
    return Contract{p.name, p.params, p.precondition, p.postcondition, {}, p.header_pos};
}

/// Trace line numbers count from the function header (header itself = 1).
inline int display_line(const ProgramAst& p, SourcePos pos) {
    return pos.line - p.header_pos.line + 1;
}

// ---- structural equality (ignores source positions) ----

inline bool equal(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return !a && !b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Expr::Kind::IntLit: return a->value == b->value;
        case Expr::Kind::Var: return a->name == b->name;
        case Expr::Kind::ArrayRead: return a->name == b->name && equal(a->lhs, b->lhs);
        default: return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    }
}

inline bool equal(const BoolPtr& a, const BoolPtr& b) {
    if (!a || !b) return !a && !b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case BoolExpr::Kind::True:
        case BoolExpr::Kind::False: return true;
        case BoolExpr::Kind::Cmp: return a->op == b->op && equal(a->e1, b->e1) && equal(a->e2, b->e2);
        case BoolExpr::Kind::Not: return equal(a->b1, b->b1);
        case BoolExpr::Kind::And:
        case BoolExpr::Kind::Or:
        case BoolExpr::Kind::Implies: return equal(a->b1, b->b1) && equal(a->b2, b->b2);
        case BoolExpr::Kind::Forall:
        case BoolExpr::Kind::Exists:
            return a->name == b->name && equal(a->e1, b->e1) && equal(a->e2, b->e2) &&
                   equal(a->b1, b->b1);
        case BoolExpr::Kind::AllDifferent: return a->name == b->name;
    }
    return false;
}

inline bool equal(const InstrPtr& a, const InstrPtr& b) {
    if (!a || !b) return !a && !b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Instr::Kind::AssignScalar:
            return a->target == b->target && equal(a->value, b->value);
        case Instr::Kind::AssignArray:
            return a->target == b->target && equal(a->index, b->index) && equal(a->value, b->value);
        case Instr::Kind::If:
            return equal(a->cond, b->cond) && equal(a->then_branch, b->then_branch) &&
                   equal(a->else_branch, b->else_branch);
        case Instr::Kind::While:
            return equal(a->cond, b->cond) && equal(a->then_branch, b->then_branch);
        case Instr::Kind::Assert:
        case Instr::Kind::Enforce: return equal(a->cond, b->cond);
        case Instr::Kind::Return: return equal(a->value, b->value);
        case Instr::Kind::Block: {
            if (a->body.size() != b->body.size()) return false;
            for (size_t i = 0; i < a->body.size(); ++i)
                if (!equal(a->body[i], b->body[i])) return false;
            return true;
        }
        case Instr::Kind::Call: {
            if (a->target != b->target || a->callee != b->callee ||
                a->args.size() != b->args.size())
                return false;
            for (size_t i = 0; i < a->args.size(); ++i)
                if (!equal(a->args[i], b->args[i])) return false;
            return true;
        }
    }
    return false;
}

inline bool equal_params(const std::vector<Param>& a, const std::vector<Param>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].name != b[i].name || a[i].is_array != b[i].is_array) return false;
        if (a[i].is_array && !equal(a[i].length, b[i].length)) return false;
    }
    return true;
}

inline bool equal(const ProgramAst& a, const ProgramAst& b) {
    if (a.name != b.name || !equal_params(a.params, b.params)) return false;
    if (!equal(a.precondition, b.precondition) || !equal(a.postcondition, b.postcondition))
        return false;
    if (a.body.size() != b.body.size()) return false;
    for (size_t i = 0; i < a.body.size(); ++i)
        if (!equal(a.body[i], b.body[i])) return false;
    if (a.contracts.size() != b.contracts.size()) return false;
    for (size_t i = 0; i < a.contracts.size(); ++i) {
        const Contract &ca = a.contracts[i], &cb = b.contracts[i];
        if (ca.name != cb.name || !equal_params(ca.params, cb.params)) return false;
        if (!equal(ca.precondition, cb.precondition) || !equal(ca.postcondition, cb.postcondition))
            return false;
        if (ca.modifies != cb.modifies) return false;
    }
    return true;
}

// ---- substitution of symbolic bounds ----

namespace detail {

inline ExprPtr subst_expr(const ExprPtr& e, const std::map<std::string, i64>& bind) {
    if (!e) return e;
    switch (e->kind) {
        case Expr::Kind::IntLit: return e;
        case Expr::Kind::Var: {
            auto it = bind.find(e->name);
            if (it != bind.end()) return mk_int(it->second, e->pos);
            return e;
        }
        case Expr::Kind::ArrayRead: return mk_read(e->name, subst_expr(e->lhs, bind), e->pos);
        default: return mk_bin(e->kind, subst_expr(e->lhs, bind), subst_expr(e->rhs, bind), e->pos);
    }
}

inline BoolPtr subst_bool(const BoolPtr& b, const std::map<std::string, i64>& bind) {
    if (!b) return b;
    switch (b->kind) {
        case BoolExpr::Kind::True:
        case BoolExpr::Kind::False:
        case BoolExpr::Kind::AllDifferent: return b;
        case BoolExpr::Kind::Cmp:
            return mk_cmp(b->op, subst_expr(b->e1, bind), subst_expr(b->e2, bind), b->pos);
        case BoolExpr::Kind::Not: return mk_not(subst_bool(b->b1, bind), b->pos);
        case BoolExpr::Kind::And:
        case BoolExpr::Kind::Or:
        case BoolExpr::Kind::Implies:
            return mk_bool2(b->kind, subst_bool(b->b1, bind), subst_bool(b->b2, bind), b->pos);
        case BoolExpr::Kind::Forall:
        case BoolExpr::Kind::Exists:
            return mk_quant(b->kind == BoolExpr::Kind::Forall, b->name, subst_expr(b->e1, bind),
                            subst_expr(b->e2, bind), subst_bool(b->b1, bind), b->pos);
    }
    return b;
}

inline InstrPtr subst_instr(const InstrPtr& s, const std::map<std::string, i64>& bind) {
    auto out = std::make_shared<Instr>(*s);
    out->index = subst_expr(s->index, bind);
    out->value = subst_expr(s->value, bind);
    out->cond = subst_bool(s->cond, bind);
    if (s->then_branch) out->then_branch = subst_instr(s->then_branch, bind);
    if (s->else_branch) out->else_branch = subst_instr(s->else_branch, bind);
    out->body.clear();
    for (auto& i : s->body) out->body.push_back(subst_instr(i, bind));
    out->args.clear();
    for (auto& a : s->args) out->args.push_back(subst_expr(a, bind));
    return out;
}

inline void subst_params_list(std::vector<Param>& params, const std::map<std::string, i64>& bind) {
    for (auto& p : params) {
        if (!p.is_array) continue;
        if (p.length->kind == Expr::Kind::Var) {
            auto it = bind.find(p.length->name);
            if (it == bind.end())
                throw VerifyError("missing binding for symbolic bound '" + p.length->name + "'");
            p.length = mk_int(it->second, p.length->pos);
        }
        if (p.length->kind != Expr::Kind::IntLit)
            throw VerifyError("array length of '" + p.name + "' is not concrete");
        if (p.length->value <= 0)
            throw VerifyError("array '" + p.name + "' has non-positive length " +
                              std::to_string(p.length->value));
    }
}

}  // namespace detail

/// Names of the symbolic bounds (array-length identifiers) still unresolved.
inline std::vector<std::string> symbolic_bounds(const ProgramAst& ast) {
    std::vector<std::string> out;
    auto scan = [&](const std::vector<Param>& ps) {
        for (const auto& p : ps)
            if (p.is_array && p.length->kind == Expr::Kind::Var) {
                bool seen = false;
                for (auto& n : out) seen = seen || n == p.length->name;
                if (!seen) out.push_back(p.length->name);
            }
    };
    scan(ast.params);
    for (const auto& c : ast.contracts) scan(c.params);
    return out;
}

/// Replaces symbolic bounds by concrete values everywhere (types, body,
/// contracts, quantifier ranges). All array lengths must come out as positive
/// integer literals.
inline ProgramAst substitute_params(const ProgramAst& ast, const std::map<std::string, i64>& bind) {
    ProgramAst out = ast;
    detail::subst_params_list(out.params, bind);
    out.precondition = detail::subst_bool(ast.precondition, bind);
    out.postcondition = detail::subst_bool(ast.postcondition, bind);
    out.body.clear();
    for (auto& s : ast.body) out.body.push_back(detail::subst_instr(s, bind));
    out.contracts.clear();
    for (const auto& c : ast.contracts) {
        Contract cc = c;
        detail::subst_params_list(cc.params, bind);
        cc.precondition = detail::subst_bool(c.precondition, bind);
        cc.postcondition = detail::subst_bool(c.postcondition, bind);
        out.contracts.push_back(std::move(cc));
    }
    return out;
}

/// Binds symbolic bounds inside a standalone contract.
inline Contract substitute_params(const Contract& c, const std::map<std::string, i64>& bind) {
    Contract cc = c;
    detail::subst_params_list(cc.params, bind);
    cc.precondition = detail::subst_bool(c.precondition, bind);
    cc.postcondition = detail::subst_bool(c.postcondition, bind);
    return cc;
}

/// Concrete array lengths by parameter name; throws if any is still symbolic.
inline std::map<std::string, i64> array_lengths(const std::vector<Param>& params) {
    std::map<std::string, i64> out;
    for (const auto& p : params) {
        if (!p.is_array) continue;
        if (p.length->kind != Expr::Kind::IntLit)
            throw VerifyError("array length of '" + p.name + "' is not concrete");
        out[p.name] = p.length->value;
    }
    return out;
}

}  // namespace cpbpv
