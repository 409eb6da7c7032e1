#pragma once

#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "cpbpv/constraint.hpp"

namespace cpbpv {

/// A satisfying assignment: versioned scalars and versioned arrays.
struct Model {
    std::map<VarRef, i64> scalars;
    std::map<VarRef, std::vector<i64>> arrays;

    bool operator==(const Model& o) const { return scalars == o.scalars && arrays == o.arrays; }

    std::string to_text() const {
        std::ostringstream os;
        for (const auto& [v, x] : scalars) os << to_string(v) << " = " << x << "\n";
        for (const auto& [a, xs] : arrays) {
            os << to_string(a) << " = [";
            for (size_t i = 0; i < xs.size(); ++i) os << (i ? ", " : "") << xs[i];
            os << "]\n";
        }
        return os.str();
    }
};

// ---- evaluation ----
// Expressions are partial: division by zero and out-of-range indices are
// undefined. Constraints evaluate three-valued; an undefined operand decides
// a connective only when the other operand already does (symmetric Kleene
// semantics), which keeps the evaluator, the solver's pruning of unsupported
// values, and the concrete interpreter in agreement.

inline std::optional<i64> eval(const SExprPtr& e, const Model& m) {
    switch (e->kind) {
        case SExpr::Kind::Const: return e->value;
        case SExpr::Kind::Var: {
            auto it = m.scalars.find(e->var);
            if (it == m.scalars.end()) return std::nullopt;
            return it->second;
        }
        case SExpr::Kind::Cell: {
            auto it = m.arrays.find(e->var);
            if (it == m.arrays.end()) return std::nullopt;
            auto idx = eval(e->a, m);
            if (!idx || *idx < 0 || *idx >= static_cast<i64>(it->second.size()))
                return std::nullopt;
            return it->second[*idx];
        }
        default: {
            auto a = eval(e->a, m);
            auto b = eval(e->b, m);
            if (!a || !b) return std::nullopt;
            switch (e->kind) {
                case SExpr::Kind::Add: return checked_add(*a, *b);
                case SExpr::Kind::Sub: return checked_sub(*a, *b);
                case SExpr::Kind::Mul: return checked_mul(*a, *b);
                case SExpr::Kind::Div: return checked_div(*a, *b);
                default: return std::nullopt;
            }
        }
    }
}

inline std::optional<bool> eval(const SConPtr& c, const Model& m) {
    switch (c->kind) {
        case SCon::Kind::True: return true;
        case SCon::Kind::False: return false;
        case SCon::Kind::Cmp: {
            auto a = eval(c->e1, m);
            auto b = eval(c->e2, m);
            if (!a || !b) return std::nullopt;
            return eval_cmp(c->op, *a, *b);
        }
        case SCon::Kind::Not: {
            auto v = eval(c->a, m);
            if (!v) return std::nullopt;
            return !*v;
        }
        case SCon::Kind::And: {
            auto a = eval(c->a, m);
            auto b = eval(c->b, m);
            if (a && !*a) return false;
            if (b && !*b) return false;
            if (a && b) return true;
            return std::nullopt;
        }
        case SCon::Kind::Or: {
            auto a = eval(c->a, m);
            auto b = eval(c->b, m);
            if (a && *a) return true;
            if (b && *b) return true;
            if (a && b) return false;
            return std::nullopt;
        }
        case SCon::Kind::Implies: {
            auto a = eval(c->a, m);
            auto b = eval(c->b, m);
            if (a && !*a) return true;
            if (b && *b) return true;
            if (a && b) return *b;  // a true, b false
            return std::nullopt;
        }
        case SCon::Kind::AllDiff: {
            auto it = m.arrays.find(c->array);
            if (it == m.arrays.end() || static_cast<i64>(it->second.size()) < c->length)
                return std::nullopt;
            for (i64 i = 0; i < c->length; ++i)
                for (i64 j = i + 1; j < c->length; ++j)
                    if (it->second[i] == it->second[j]) return false;
            return true;
        }
    }
    return std::nullopt;
}

/// True iff the model definitely satisfies every constraint.
inline bool satisfies(std::span<const SConPtr> cs, const Model& m) {
    for (const auto& c : cs) {
        auto v = eval(c, m);
        if (!v || !*v) return false;
    }
    return true;
}

}  // namespace cpbpv
