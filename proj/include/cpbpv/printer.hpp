#pragma once

#include <sstream>
#include <string>

#include "cpbpv/ast.hpp"

namespace cpbpv {

// Renders an AST back to surface syntax. The output reparses to a structurally
// equal AST (round-trip property); formatting is canonical, not the original.

namespace detail {

inline int expr_prec(Expr::Kind k) {
    switch (k) {
        case Expr::Kind::Add:
        case Expr::Kind::Sub: return 1;
        case Expr::Kind::Mul:
        case Expr::Kind::Div: return 2;
        default: return 3;
    }
}

inline void print_expr(std::ostream& os, const ExprPtr& e, int parent_prec = 0) {
    int prec = expr_prec(e->kind);
    switch (e->kind) {
        case Expr::Kind::IntLit: os << e->value; return;
        case Expr::Kind::Var: os << e->name; return;
        case Expr::Kind::ArrayRead:
            os << e->name << "[";
            print_expr(os, e->lhs);
            os << "]";
            return;
        default: break;
    }
    bool paren = prec < parent_prec;
    if (paren) os << "(";
    const char* op = e->kind == Expr::Kind::Add   ? " + "
                     : e->kind == Expr::Kind::Sub ? " - "
                     : e->kind == Expr::Kind::Mul ? " * "
                                                  : " / ";
    // left-associative: right operand needs one level more
    print_expr(os, e->lhs, prec);
    os << op;
    print_expr(os, e->rhs, prec + 1);
    if (paren) os << ")";
}

inline int bool_prec(BoolExpr::Kind k) {
    switch (k) {
        case BoolExpr::Kind::Implies: return 1;
        case BoolExpr::Kind::Or: return 2;
        case BoolExpr::Kind::And: return 3;
        case BoolExpr::Kind::Not: return 4;
        default: return 5;
    }
}

inline void print_bool(std::ostream& os, const BoolPtr& b, int parent_prec = 0) {
    int prec = bool_prec(b->kind);
    bool paren = prec < parent_prec;
    switch (b->kind) {
        case BoolExpr::Kind::True: os << "true"; return;
        case BoolExpr::Kind::False: os << "false"; return;
        case BoolExpr::Kind::Cmp:
            print_expr(os, b->e1);
            os << " " << to_string(b->op) << " ";
            print_expr(os, b->e2);
            return;
        case BoolExpr::Kind::AllDifferent: os << "alldifferent(" << b->name << ")"; return;
        case BoolExpr::Kind::Not:
            os << "!";
            print_bool(os, b->b1, 5);  // operand must be primary
            return;
        case BoolExpr::Kind::Forall:
        case BoolExpr::Kind::Exists: {
            if (paren) os << "(";
            os << (b->kind == BoolExpr::Kind::Forall ? "forall " : "exists ") << b->name << " in [";
            print_expr(os, b->e1);
            os << ", ";
            print_expr(os, b->e2);
            os << "): ";
            print_bool(os, b->b1, 1);
            if (paren) os << ")";
            return;
        }
        default: break;
    }
    if (paren) os << "(";
    const char* op = b->kind == BoolExpr::Kind::And  ? " && "
                     : b->kind == BoolExpr::Kind::Or ? " || "
                                                     : " ==> ";
    if (b->kind == BoolExpr::Kind::Implies) {  // right-associative
        print_bool(os, b->b1, prec + 1);
        os << op;
        print_bool(os, b->b2, prec);
    } else {
        print_bool(os, b->b1, prec);
        os << op;
        print_bool(os, b->b2, prec + 1);
    }
    if (paren) os << ")";
}

inline void print_indent(std::ostream& os, int n) {
    for (int i = 0; i < n; ++i) os << "    ";
}

inline void print_instr(std::ostream& os, const InstrPtr& s, int indent) {
    print_indent(os, indent);
    switch (s->kind) {
        case Instr::Kind::AssignScalar:
            if (s->is_decl) os << "int ";
            os << s->target << " = ";
            print_expr(os, s->value);
            os << ";\n";
            return;
        case Instr::Kind::AssignArray:
            os << s->target << "[";
            print_expr(os, s->index);
            os << "] = ";
            print_expr(os, s->value);
            os << ";\n";
            return;
        case Instr::Kind::Call: {
            if (s->is_decl) os << "int ";
            os << s->target << " = " << s->callee << "(";
            for (size_t i = 0; i < s->args.size(); ++i) {
                if (i) os << ", ";
                print_expr(os, s->args[i]);
            }
            os << ");\n";
            return;
        }
        case Instr::Kind::If:
            os << "if (";
            print_bool(os, s->cond);
            os << ")\n";
            print_instr(os, s->then_branch, indent + 1);
            if (s->else_branch) {
                print_indent(os, indent);
                os << "else\n";
                print_instr(os, s->else_branch, indent + 1);
            }
            return;
        case Instr::Kind::While:
            os << "while (";
            print_bool(os, s->cond);
            os << ")\n";
            print_instr(os, s->then_branch, indent + 1);
            return;
        case Instr::Kind::Assert:
            os << "assert(";
            print_bool(os, s->cond);
            os << ");\n";
            return;
        case Instr::Kind::Enforce:
            os << "enforce(";
            print_bool(os, s->cond);
            os << ");\n";
            return;
        case Instr::Kind::Return:
            os << "return ";
            print_expr(os, s->value);
            os << ";\n";
            return;
        case Instr::Kind::Block:
            os << "{\n";
            for (auto& i : s->body) print_instr(os, i, indent + 1);
            print_indent(os, indent);
            os << "}\n";
            return;
    }
}

inline void print_header(std::ostream& os, const std::string& name,
                         const std::vector<Param>& params, const BoolPtr& pre, const BoolPtr& post,
                         const std::vector<std::string>& modifies) {
    if (pre && pre->kind != BoolExpr::Kind::True) {
        os << "requires ";
        print_bool(os, pre);
        os << "\n";
    }
    if (post && post->kind != BoolExpr::Kind::True) {
        os << "ensures ";
        print_bool(os, post);
        os << "\n";
    }
    if (!modifies.empty()) {
        os << "modifies ";
        for (size_t i = 0; i < modifies.size(); ++i) os << (i ? ", " : "") << modifies[i];
        os << "\n";
    }
    os << "int " << name << "(";
    for (size_t i = 0; i < params.size(); ++i) {
        if (i) os << ", ";
        if (params[i].is_array) {
            os << "int[";
            print_expr(os, params[i].length);
            os << "] " << params[i].name;
        } else {
            os << "int " << params[i].name;
        }
    }
    os << ")";
}

}  // namespace detail

inline std::string to_source(const ProgramAst& p) {
    std::ostringstream os;
    for (const auto& c : p.contracts) {
        detail::print_header(os, c.name, c.params, c.precondition, c.postcondition, c.modifies);
        os << ";\n\n";
    }
    detail::print_header(os, p.name, p.params, p.precondition, p.postcondition, {});
    os << " {\n";
    for (auto& s : p.body) detail::print_instr(os, s, 1);
    os << "}\n";
    return os.str();
}

inline std::string to_source(const BoolPtr& b) {
    std::ostringstream os;
    detail::print_bool(os, b);
    return os.str();
}

inline std::string to_source(const ExprPtr& e) {
    std::ostringstream os;
    detail::print_expr(os, e);
    return os.str();
}

}  // namespace cpbpv
