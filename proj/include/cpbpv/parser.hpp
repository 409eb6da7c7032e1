#pragma once

#include <cctype>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cpbpv/ast.hpp"

namespace cpbpv {

// Recursive-descent frontend for the contract language (one defined function
// per file plus contract-only declarations; `#` starts a line comment). The
// grammar is documented in docs/grammar.md.

namespace detail {

struct Token {
    enum class Kind { Ident, Int, Punct, End };
    Kind kind;
    std::string text;  // punctuation spelled out, e.g. "==>", "<="
    i64 value = 0;
    SourcePos pos;
};

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) { return ident_start(c) || std::isdigit(static_cast<unsigned char>(c)); }

inline std::vector<Token> tokenize(const std::string& src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto advance = [&](size_t n) {
        for (size_t k = 0; k < n; ++k) {
            if (src[i + k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        i += n;
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == '#') {  // comment to end of line
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        SourcePos pos{line, col};
        if (ident_start(c)) {
            size_t j = i;
            while (j < src.size() && ident_char(src[j])) ++j;
            out.push_back({Token::Kind::Ident, src.substr(i, j - i), 0, pos});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            std::string digits = src.substr(i, j - i);
            i64 v = 0;
            try {
                v = std::stoll(digits);
            } catch (...) {
                throw ParseError(pos, "integer literal out of range");
            }
            out.push_back({Token::Kind::Int, digits, v, pos});
            advance(j - i);
            continue;
        }
        // multi-char punctuation first
        static const char* three[] = {"==>"};
        static const char* two[] = {"==", "!=", "<=", ">=", "&&", "||"};
        bool matched = false;
        for (const char* p : three)
            if (src.compare(i, 3, p) == 0) {
                out.push_back({Token::Kind::Punct, p, 0, pos});
                advance(3);
                matched = true;
                break;
            }
        if (matched) continue;
        for (const char* p : two)
            if (src.compare(i, 2, p) == 0) {
                out.push_back({Token::Kind::Punct, p, 0, pos});
                advance(2);
                matched = true;
                break;
            }
        if (matched) continue;
        static const std::string singles = "()[]{},;=<>!+-*/.:";
        if (singles.find(c) != std::string::npos) {
            out.push_back({Token::Kind::Punct, std::string(1, c), 0, pos});
            advance(1);
            continue;
        }
        throw ParseError(pos, std::string("unexpected character '") + c + "'");
    }
    SourcePos end{line, col};
    out.push_back({Token::Kind::End, "<eof>", 0, end});
    return out;
}

class Parser {
public:
    explicit Parser(const std::string& src) : toks_(tokenize(src)) {}

    /// Contract-only parsing: every declaration contributes its contract;
    /// definitions are allowed and contribute theirs.
    std::vector<Contract> parse_contract_file() {
        std::vector<Contract> out;
        while (!at_end()) {
            Declaration d = parse_declaration();
            Contract c{d.name, d.params, d.pre, d.post, d.modifies, d.header_pos};
            check_contract(c);
            out.push_back(std::move(c));
        }
        return out;
    }

    ProgramAst parse_file() {
        ProgramAst main;
        bool have_main = false;
        std::vector<Contract> contracts;
        while (!at_end()) {
            Declaration d = parse_declaration();
            if (d.has_body) {
                if (have_main)
                    throw ParseError(d.header_pos, "only one function definition per file");
                main.name = d.name;
                main.params = d.params;
                main.precondition = d.pre;
                main.postcondition = d.post;
                main.body = d.body;
                main.header_pos = d.header_pos;
                if (!d.modifies.empty())
                    throw ParseError(d.header_pos,
                                     "'modifies' is only meaningful on a contract declaration");
                have_main = true;
            } else {
                contracts.push_back(
                    Contract{d.name, d.params, d.pre, d.post, d.modifies, d.header_pos});
            }
        }
        if (!have_main) throw ParseError(peek().pos, "no function definition in file");
        main.contracts = std::move(contracts);
        check_program(main);
        return main;
    }

private:
    struct Declaration {
        std::string name;
        std::vector<Param> params;
        BoolPtr pre, post;
        std::vector<std::string> modifies;
        std::vector<InstrPtr> body;
        bool has_body = false;
        SourcePos header_pos;
    };

    const std::vector<Token> toks_;
    size_t at_ = 0;

    const Token& peek(size_t off = 0) const {
        size_t i = at_ + off;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    bool at_end() const { return peek().kind == Token::Kind::End; }
    const Token& next() { return toks_[at_ < toks_.size() - 1 ? at_++ : at_]; }

    bool is_punct(const char* p, size_t off = 0) const {
        return peek(off).kind == Token::Kind::Punct && peek(off).text == p;
    }
    bool is_kw(const char* w, size_t off = 0) const {
        return peek(off).kind == Token::Kind::Ident && peek(off).text == w;
    }
    bool accept_punct(const char* p) {
        if (!is_punct(p)) return false;
        next();
        return true;
    }
    void expect_punct(const char* p) {
        if (!accept_punct(p))
            throw ParseError(peek().pos, "expected '" + std::string(p) + "', found '" +
                                             peek().text + "'");
    }
    bool accept_kw(const char* w) {
        if (!is_kw(w)) return false;
        next();
        return true;
    }
    void expect_kw(const char* w) {
        if (!accept_kw(w))
            throw ParseError(peek().pos, "expected '" + std::string(w) + "', found '" +
                                             peek().text + "'");
    }

    static bool reserved(const std::string& s) {
        static const std::set<std::string> kws = {
            "int",    "if",     "else",   "while",  "assert", "enforce",      "return",
            "true",   "false",  "requires", "ensures", "modifies", "forall", "exists",
            "in",     "alldifferent", "result"};
        return kws.count(s) > 0;
    }

    std::string expect_ident() {
        if (peek().kind != Token::Kind::Ident)
            throw ParseError(peek().pos, "expected identifier, found '" + peek().text + "'");
        if (reserved(peek().text))
            throw ParseError(peek().pos, "'" + peek().text + "' is a reserved word");
        return next().text;
    }

    // --- declarations ---

    Declaration parse_declaration() {
        Declaration d;
        d.pre = mk_bool(true);
        d.post = mk_bool(true);
        bool saw_pre = false, saw_post = false;
        while (true) {
            if (is_kw("requires")) {
                SourcePos p = next().pos;
                if (saw_pre) throw ParseError(p, "duplicate 'requires' clause");
                d.pre = parse_bool(true);
                saw_pre = true;
            } else if (is_kw("ensures")) {
                SourcePos p = next().pos;
                if (saw_post) throw ParseError(p, "duplicate 'ensures' clause");
                d.post = parse_bool(true);
                saw_post = true;
            } else if (is_kw("modifies")) {
                next();
                d.modifies.push_back(expect_ident());
                while (accept_punct(",")) d.modifies.push_back(expect_ident());
            } else {
                break;
            }
        }
        d.header_pos = peek().pos;
        expect_kw("int");
        d.name = expect_ident();
        expect_punct("(");
        if (!is_punct(")")) {
            d.params.push_back(parse_param());
            while (accept_punct(",")) d.params.push_back(parse_param());
        }
        expect_punct(")");
        if (accept_punct(";")) {
            d.has_body = false;
            return d;
        }
        InstrPtr block = parse_block();
        d.body = block->body;
        d.has_body = true;
        return d;
    }

    Param parse_param() {
        Param p;
        p.pos = peek().pos;
        expect_kw("int");
        if (accept_punct("[")) {
            p.is_array = true;
            if (peek().kind == Token::Kind::Int) {
                const Token& t = next();
                p.length = mk_int(t.value, t.pos);
            } else {
                SourcePos bp = peek().pos;
                p.length = mk_var(expect_ident(), bp);
            }
            expect_punct("]");
        }
        p.name = expect_ident();
        return p;
    }

    // --- statements ---

    InstrPtr parse_block() {
        auto blk = std::make_shared<Instr>();
        blk->kind = Instr::Kind::Block;
        blk->pos = peek().pos;
        expect_punct("{");
        while (!is_punct("}")) {
            if (at_end()) throw ParseError(peek().pos, "unterminated block");
            blk->body.push_back(parse_stmt());
        }
        expect_punct("}");
        return blk;
    }

    InstrPtr parse_stmt() {
        SourcePos pos = peek().pos;
        if (is_punct("{")) return parse_block();
        if (accept_kw("if")) {
            expect_punct("(");
            BoolPtr cond = parse_bool(false);
            expect_punct(")");
            auto s = std::make_shared<Instr>();
            s->kind = Instr::Kind::If;
            s->pos = pos;
            s->cond = cond;
            s->then_branch = parse_stmt();
            if (accept_kw("else")) s->else_branch = parse_stmt();
            return s;
        }
        if (accept_kw("while")) {
            expect_punct("(");
            BoolPtr cond = parse_bool(false);
            expect_punct(")");
            auto s = std::make_shared<Instr>();
            s->kind = Instr::Kind::While;
            s->pos = pos;
            s->cond = cond;
            s->then_branch = parse_stmt();
            return s;
        }
        if (is_kw("assert") || is_kw("enforce")) {
            bool is_assert = peek().text == "assert";
            next();
            expect_punct("(");
            BoolPtr cond = parse_bool(false);
            expect_punct(")");
            expect_punct(";");
            auto s = std::make_shared<Instr>();
            s->kind = is_assert ? Instr::Kind::Assert : Instr::Kind::Enforce;
            s->pos = pos;
            s->cond = cond;
            return s;
        }
        if (accept_kw("return")) {
            auto s = std::make_shared<Instr>();
            s->kind = Instr::Kind::Return;
            s->pos = pos;
            s->value = parse_expr();
            expect_punct(";");
            return s;
        }
        bool is_decl = accept_kw("int");
        std::string name = expect_ident();
        if (!is_decl && accept_punct("[")) {
            auto s = std::make_shared<Instr>();
            s->kind = Instr::Kind::AssignArray;
            s->pos = pos;
            s->target = name;
            s->index = parse_expr();
            expect_punct("]");
            expect_punct("=");
            s->value = parse_expr();
            expect_punct(";");
            return s;
        }
        expect_punct("=");
        // call assignment: ident '(' ... ')'
        if (peek().kind == Token::Kind::Ident && !reserved(peek().text) && is_punct("(", 1)) {
            auto s = std::make_shared<Instr>();
            s->kind = Instr::Kind::Call;
            s->pos = pos;
            s->is_decl = is_decl;
            s->target = name;
            s->callee = next().text;
            expect_punct("(");
            if (!is_punct(")")) {
                s->args.push_back(parse_expr());
                while (accept_punct(",")) s->args.push_back(parse_expr());
            }
            expect_punct(")");
            expect_punct(";");
            return s;
        }
        auto s = std::make_shared<Instr>();
        s->kind = Instr::Kind::AssignScalar;
        s->pos = pos;
        s->is_decl = is_decl;
        s->target = name;
        s->value = parse_expr();
        expect_punct(";");
        return s;
    }

    // --- boolean expressions ---
    // implies (right-assoc) < or < and < not < primary

    BoolPtr parse_bool(bool spec) {
        BoolPtr lhs = parse_or(spec);
        if (is_punct("==>")) {
            SourcePos p = next().pos;
            BoolPtr rhs = parse_bool(spec);
            return mk_bool2(BoolExpr::Kind::Implies, lhs, rhs, p);
        }
        return lhs;
    }

    BoolPtr parse_or(bool spec) {
        BoolPtr lhs = parse_and(spec);
        while (is_punct("||")) {
            SourcePos p = next().pos;
            lhs = mk_bool2(BoolExpr::Kind::Or, lhs, parse_and(spec), p);
        }
        return lhs;
    }

    BoolPtr parse_and(bool spec) {
        BoolPtr lhs = parse_not(spec);
        while (is_punct("&&")) {
            SourcePos p = next().pos;
            lhs = mk_bool2(BoolExpr::Kind::And, lhs, parse_not(spec), p);
        }
        return lhs;
    }

    BoolPtr parse_not(bool spec) {
        if (is_punct("!") && !is_punct("!=")) {
            SourcePos p = next().pos;
            return mk_not(parse_not(spec), p);
        }
        return parse_bool_primary(spec);
    }

    BoolPtr parse_bool_primary(bool spec) {
        SourcePos pos = peek().pos;
        if (accept_kw("true")) return mk_bool(true, pos);
        if (accept_kw("false")) return mk_bool(false, pos);
        if (spec && (is_kw("forall") || is_kw("exists"))) {
            bool universal = peek().text == "forall";
            next();
            std::string var = expect_ident();
            expect_kw("in");
            expect_punct("[");
            ExprPtr lo = parse_expr();
            expect_punct(",");
            ExprPtr hi = parse_expr();
            expect_punct(")");
            expect_punct(":");
            BoolPtr body = parse_bool(spec);
            return mk_quant(universal, var, lo, hi, body, pos);
        }
        if (spec && accept_kw("alldifferent")) {
            expect_punct("(");
            std::string arr = expect_ident();
            expect_punct(")");
            return mk_alldifferent(arr, pos);
        }
        // Either a parenthesized boolean or a comparison of two integer
        // expressions. Try the comparison reading first; rewind on failure and
        // keep whichever attempt got further for the error message.
        size_t mark = at_;
        ParseError cmp_err({0, 0}, "");
        size_t cmp_progress = mark;
        try {
            ExprPtr lhs = parse_expr();
            CmpOp op = parse_cmp_op();
            ExprPtr rhs = parse_expr();
            return mk_cmp(op, lhs, rhs, pos);
        } catch (const ParseError& e) {
            cmp_err = e;
            cmp_progress = at_;
            at_ = mark;
        }
        try {
            expect_punct("(");
            BoolPtr inner = parse_bool(spec);
            expect_punct(")");
            return inner;
        } catch (const ParseError&) {
            if (cmp_progress > at_) throw cmp_err;
            throw;
        }
    }

    CmpOp parse_cmp_op() {
        if (accept_punct("==")) return CmpOp::Eq;
        if (accept_punct("!=")) return CmpOp::Ne;
        if (accept_punct("<=")) return CmpOp::Le;
        if (accept_punct(">=")) return CmpOp::Ge;
        if (accept_punct("<")) return CmpOp::Lt;
        if (accept_punct(">")) return CmpOp::Gt;
        throw ParseError(peek().pos, "expected comparison operator, found '" + peek().text + "'");
    }

    // --- integer expressions ---

    ExprPtr parse_expr() {
        ExprPtr lhs = parse_term();
        while (is_punct("+") || is_punct("-")) {
            bool add = peek().text == "+";
            SourcePos p = next().pos;
            lhs = mk_bin(add ? Expr::Kind::Add : Expr::Kind::Sub, lhs, parse_term(), p);
        }
        return lhs;
    }

    ExprPtr parse_term() {
        ExprPtr lhs = parse_unary();
        while (is_punct("*") || is_punct("/")) {
            bool mul = peek().text == "*";
            SourcePos p = next().pos;
            lhs = mk_bin(mul ? Expr::Kind::Mul : Expr::Kind::Div, lhs, parse_unary(), p);
        }
        return lhs;
    }

    ExprPtr parse_unary() {
        if (is_punct("-")) {
            SourcePos p = next().pos;
            if (peek().kind == Token::Kind::Int) {
                const Token& t = next();
                return mk_int(-t.value, p);
            }
            return mk_bin(Expr::Kind::Sub, mk_int(0, p), parse_unary(), p);
        }
        return parse_postfix();
    }

    ExprPtr parse_postfix() {
        SourcePos pos = peek().pos;
        if (peek().kind == Token::Kind::Int) {
            const Token& t = next();
            return mk_int(t.value, t.pos);
        }
        if (accept_punct("(")) {
            ExprPtr e = parse_expr();
            expect_punct(")");
            return e;
        }
        if (peek().kind != Token::Kind::Ident || (reserved(peek().text) && !is_kw("result")))
            throw ParseError(pos, "expected expression, found '" + peek().text + "'");
        std::string name = next().text;
        if (accept_punct("[")) {
            ExprPtr idx = parse_expr();
            expect_punct("]");
            return mk_read(name, idx, pos);
        }
        if (is_punct(".") && is_kw("length", 1)) {
            next();
            next();
            // resolved to the declared length during the checking pass
            return mk_read(name, nullptr, pos);  // marker: ArrayRead with null index
        }
        return mk_var(name, pos);
    }

    // --- name/kind resolution and well-formedness ---

    struct Scope {
        std::set<std::string> scalars;
        std::map<std::string, ExprPtr> arrays;  // name -> declared length expr
        std::set<std::string> bounds;           // symbolic length identifiers
        bool allow_result = false;
    };

    static void note_bound(Scope& sc, const ExprPtr& len) {
        if (len->kind == Expr::Kind::Var) sc.bounds.insert(len->name);
    }

    ExprPtr check_expr(const ExprPtr& e, const Scope& sc) {
        switch (e->kind) {
            case Expr::Kind::IntLit: return e;
            case Expr::Kind::Var:
                if (e->name == "result") {
                    if (!sc.allow_result)
                        throw ParseError(e->pos, "'result' may only appear in an ensures clause");
                    return e;
                }
                if (sc.arrays.count(e->name))
                    throw ParseError(e->pos, "array '" + e->name + "' used as a scalar");
                if (!sc.scalars.count(e->name) && !sc.bounds.count(e->name))
                    throw ParseError(e->pos, "use of undeclared identifier '" + e->name + "'");
                return e;
            case Expr::Kind::ArrayRead: {
                auto it = sc.arrays.find(e->name);
                if (it == sc.arrays.end()) {
                    if (sc.scalars.count(e->name) || sc.bounds.count(e->name))
                        throw ParseError(e->pos, "scalar '" + e->name + "' used as an array");
                    throw ParseError(e->pos, "use of undeclared identifier '" + e->name + "'");
                }
                if (!e->lhs) return it->second;  // `.length` marker -> declared length
                return mk_read(e->name, check_expr(e->lhs, sc), e->pos);
            }
            default:
                return mk_bin(e->kind, check_expr(e->lhs, sc), check_expr(e->rhs, sc), e->pos);
        }
    }

    BoolPtr check_bool(const BoolPtr& b, Scope& sc) {
        switch (b->kind) {
            case BoolExpr::Kind::True:
            case BoolExpr::Kind::False: return b;
            case BoolExpr::Kind::Cmp:
                return mk_cmp(b->op, check_expr(b->e1, sc), check_expr(b->e2, sc), b->pos);
            case BoolExpr::Kind::Not: return mk_not(check_bool(b->b1, sc), b->pos);
            case BoolExpr::Kind::And:
            case BoolExpr::Kind::Or:
            case BoolExpr::Kind::Implies:
                return mk_bool2(b->kind, check_bool(b->b1, sc), check_bool(b->b2, sc), b->pos);
            case BoolExpr::Kind::Forall:
            case BoolExpr::Kind::Exists: {
                if (sc.scalars.count(b->name) || sc.arrays.count(b->name) ||
                    sc.bounds.count(b->name))
                    throw ParseError(b->pos, "quantified variable '" + b->name +
                                                 "' shadows a program identifier");
                ExprPtr lo = check_expr(b->e1, sc);
                ExprPtr hi = check_expr(b->e2, sc);
                sc.scalars.insert(b->name);
                BoolPtr body = check_bool(b->b1, sc);
                sc.scalars.erase(b->name);
                return mk_quant(b->kind == BoolExpr::Kind::Forall, b->name, lo, hi, body, b->pos);
            }
            case BoolExpr::Kind::AllDifferent:
                if (!sc.arrays.count(b->name))
                    throw ParseError(b->pos, "alldifferent expects a declared array, got '" +
                                                 b->name + "'");
                return b;
        }
        return b;
    }

    InstrPtr check_instr(const InstrPtr& s, Scope& sc) {
        auto out = std::make_shared<Instr>(*s);
        switch (s->kind) {
            case Instr::Kind::AssignScalar:
            case Instr::Kind::Call: {
                if (s->is_decl) {
                    if (sc.scalars.count(s->target) || sc.arrays.count(s->target) ||
                        sc.bounds.count(s->target) || s->target == "result")
                        throw ParseError(s->pos, "redeclaration of '" + s->target + "'");
                } else {
                    if (sc.arrays.count(s->target))
                        throw ParseError(s->pos, "array '" + s->target + "' used as a scalar");
                    if (sc.bounds.count(s->target))
                        throw ParseError(s->pos, "cannot assign to symbolic bound '" + s->target + "'");
                    if (!sc.scalars.count(s->target))
                        throw ParseError(s->pos,
                                         "assignment to undeclared variable '" + s->target + "'");
                }
                // rhs checked before the declared name becomes visible
                if (s->kind == Instr::Kind::AssignScalar) {
                    out->value = check_expr(s->value, sc);
                } else {
                    out->args.clear();
                    for (auto& a : s->args) {
                        // whole arrays may be passed by name
                        if (a->kind == Expr::Kind::Var && sc.arrays.count(a->name))
                            out->args.push_back(a);
                        else
                            out->args.push_back(check_expr(a, sc));
                    }
                }
                if (s->is_decl) sc.scalars.insert(s->target);
                return out;
            }
            case Instr::Kind::AssignArray: {
                if (!sc.arrays.count(s->target)) {
                    if (sc.scalars.count(s->target))
                        throw ParseError(s->pos, "scalar '" + s->target + "' used as an array");
                    throw ParseError(s->pos,
                                     "use of undeclared identifier '" + s->target + "'");
                }
                out->index = check_expr(s->index, sc);
                out->value = check_expr(s->value, sc);
                return out;
            }
            case Instr::Kind::If:
                out->cond = check_bool(s->cond, sc);
                out->then_branch = check_instr(s->then_branch, sc);
                if (s->else_branch) out->else_branch = check_instr(s->else_branch, sc);
                return out;
            case Instr::Kind::While:
                out->cond = check_bool(s->cond, sc);
                out->then_branch = check_instr(s->then_branch, sc);
                return out;
            case Instr::Kind::Assert:
            case Instr::Kind::Enforce:
                out->cond = check_bool(s->cond, sc);
                return out;
            case Instr::Kind::Return: out->value = check_expr(s->value, sc); return out;
            case Instr::Kind::Block: {
                out->body.clear();
                for (auto& i : s->body) out->body.push_back(check_instr(i, sc));
                return out;
            }
        }
        return out;
    }

    Scope scope_of(const std::vector<Param>& params, SourcePos where) {
        Scope sc;
        for (const auto& p : params) {
            if (sc.scalars.count(p.name) || sc.arrays.count(p.name))
                throw ParseError(p.pos, "duplicate parameter '" + p.name + "'");
            if (p.is_array) {
                sc.arrays[p.name] = p.length;
                note_bound(sc, p.length);
            } else {
                sc.scalars.insert(p.name);
            }
        }
        for (const auto& p : params)
            if (!p.is_array && sc.bounds.count(p.name))
                throw ParseError(where, "identifier '" + p.name +
                                            "' is both a parameter and a symbolic bound");
        return sc;
    }

    void check_contract(Contract& c) {
        Scope sc = scope_of(c.params, c.header_pos);
        c.precondition = check_bool(c.precondition, sc);
        sc.allow_result = true;
        c.postcondition = check_bool(c.postcondition, sc);
        for (const auto& m : c.modifies)
            if (!sc.arrays.count(m))
                throw ParseError(c.header_pos,
                                 "'modifies " + m + "': not an array parameter of " + c.name);
    }

    void check_program(ProgramAst& ast) {
        for (auto& c : ast.contracts) check_contract(c);
        Scope sc = scope_of(ast.params, ast.header_pos);
        ast.precondition = check_bool(ast.precondition, sc);
        {
            Scope post_sc = sc;
            post_sc.allow_result = true;
            ast.postcondition = check_bool(ast.postcondition, post_sc);
        }
        std::vector<InstrPtr> checked;
        for (auto& s : ast.body) checked.push_back(check_instr(s, sc));
        ast.body = std::move(checked);
    }
};

}  // namespace detail

/// Parses one source file: a single function definition plus any contract-only
/// declarations. Performs name and kind checking; `a.length` is resolved to
/// the declared length expression.
inline ProgramAst parse_program(const std::string& source) {
    detail::Parser p(source);
    return p.parse_file();
}

/// Parses a file for its contracts only (declarations and definitions alike).
inline std::vector<Contract> parse_contracts(const std::string& source) {
    detail::Parser p(source);
    return p.parse_contract_file();
}

}  // namespace cpbpv
