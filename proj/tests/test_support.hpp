#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cpbpv/constraint.hpp"
#include "cpbpv/model.hpp"

namespace cpbpv::testing {

/// Deterministic, platform-independent generator (splitmix64). Distributions
/// are taken modulo the range on purpose: std:: distributions are not
/// portable across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform-ish integer in [lo, hi].
    i64 range(i64 lo, i64 hi) {
        return lo + static_cast<i64>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    bool chance(int percent) { return range(0, 99) < percent; }

private:
    std::uint64_t state_;
};

// ---- exhaustive model enumeration over small universes ----

struct Universe {
    std::vector<std::pair<VarRef, std::pair<i64, i64>>> scalars;  // var -> [lo, hi]
    std::vector<std::pair<VarRef, std::pair<i64, i64>>> arrays;   // per-cell range
    std::map<VarRef, i64> array_len;
};

/// Calls fn(model) for every assignment of the universe; stops early when fn
/// returns false. Returns false iff stopped early.
template <typename Fn>
bool for_each_model(const Universe& u, Fn&& fn) {
    struct Slot {
        bool is_cell;
        VarRef var;
        i64 idx;
        i64 lo, hi;
    };
    std::vector<Slot> slots;
    for (const auto& [v, r] : u.scalars) slots.push_back({false, v, 0, r.first, r.second});
    for (const auto& [a, r] : u.arrays) {
        i64 n = u.array_len.at(a);
        for (i64 i = 0; i < n; ++i) slots.push_back({true, a, i, r.first, r.second});
    }
    std::vector<i64> cur;
    for (const auto& s : slots) cur.push_back(s.lo);
    while (true) {
        Model m;
        for (size_t i = 0; i < slots.size(); ++i) {
            if (slots[i].is_cell) {
                auto& arr = m.arrays[slots[i].var];
                if (arr.empty()) arr.resize(static_cast<size_t>(u.array_len.at(slots[i].var)));
                arr[static_cast<size_t>(slots[i].idx)] = cur[i];
            } else {
                m.scalars[slots[i].var] = cur[i];
            }
        }
        if (!fn(m)) return false;
        size_t i = slots.size();
        while (i > 0) {
            --i;
            if (cur[i] < slots[i].hi) {
                ++cur[i];
                break;
            }
            cur[i] = slots[i].lo;
            if (i == 0) return true;
        }
        if (slots.empty()) return true;
    }
}

/// True iff some assignment satisfies every constraint (Kleene-definite).
inline bool enumeration_sat(const Universe& u, const std::vector<SConPtr>& cs,
                            Model* found = nullptr) {
    bool sat = false;
    for_each_model(u, [&](const Model& m) {
        if (satisfies(std::span<const SConPtr>(cs.data(), cs.size()), m)) {
            sat = true;
            if (found) *found = m;
            return false;
        }
        return true;
    });
    return sat;
}

// ---- random constraint stores (for solver soundness suites) ----

struct RandomStore {
    std::vector<SConPtr> constraints;
    Universe universe;
};

/// Stores over <=4 scalar variables (domains of <=5 values) and possibly one
/// 3-cell array; atoms include linear comparisons, products, element reads
/// and alldifferent, plus occasional disjunctions. Division-free so that the
/// complement law is exact.
inline RandomStore random_store(Rng& rng, int bits) {
    RandomStore out;
    int nvars = static_cast<int>(rng.range(1, 4));
    std::vector<VarRef> vars;
    for (int i = 0; i < nvars; ++i) {
        VarRef v{std::string(1, static_cast<char>('x' + i)), 0};
        i64 lo = rng.range(-3, 2);
        i64 width = rng.range(0, 4);
        i64 hi = std::min(lo + width, max_value(bits));
        out.universe.scalars.push_back({v, {lo, hi}});
        out.constraints.push_back(sc_cmp(CmpOp::Ge, sc_var(v), sc_const(lo)));
        out.constraints.push_back(sc_cmp(CmpOp::Le, sc_var(v), sc_const(hi)));
        vars.push_back(v);
    }
    bool with_array = rng.chance(40);
    VarRef arr{"a", 0};
    if (with_array) {
        out.universe.arrays.push_back({arr, {0, 3}});
        out.universe.array_len[arr] = 3;
        for (i64 i = 0; i < 3; ++i) {
            out.constraints.push_back(
                sc_cmp(CmpOp::Ge, sc_cell(arr, sc_const(i)), sc_const(0)));
            out.constraints.push_back(
                sc_cmp(CmpOp::Le, sc_cell(arr, sc_const(i)), sc_const(3)));
        }
    }

    auto rand_var = [&]() { return sc_var(vars[static_cast<size_t>(rng.range(0, nvars - 1))]); };
    auto rand_expr = [&]() -> SExprPtr {
        switch (rng.range(0, 5)) {
            case 0: return sc_const(rng.range(-4, 4));
            case 1:
            case 2: return rand_var();
            case 3: return sc_bin(SExpr::Kind::Add, rand_var(), rand_var());
            case 4: return sc_bin(SExpr::Kind::Sub, rand_var(), sc_const(rng.range(0, 3)));
            default: return sc_bin(SExpr::Kind::Mul, rand_var(), rand_var());
        }
    };
    auto rand_cmp = [&]() {
        static const CmpOp ops[6] = {CmpOp::Eq, CmpOp::Ne, CmpOp::Lt,
                                     CmpOp::Le, CmpOp::Gt, CmpOp::Ge};
        return ops[rng.range(0, 5)];
    };
    auto rand_atom = [&]() -> SConPtr {
        if (with_array && rng.chance(30))
            return sc_cmp(rand_cmp(), sc_cell(arr, rand_var()), rand_expr());
        return sc_cmp(rand_cmp(), rand_expr(), rand_expr());
    };

    int natoms = static_cast<int>(rng.range(1, 4));
    for (int i = 0; i < natoms; ++i) {
        SConPtr c = rand_atom();
        if (rng.chance(25)) c = sc_or(c, rand_atom());  // exercise splitting
        out.constraints.push_back(std::move(c));
    }
    if (with_array && rng.chance(40)) out.constraints.push_back(sc_alldiff(arr, 3));
    return out;
}

// ---- random straight-line/if/while programs over scalars ----

/// Division- and array-free programs over at most 3 input variables, with
/// loops that provably count down, suitable for differential testing of the
/// symbolic executor against the exhaustive oracle.
inline std::string random_program(Rng& rng) {
    int nparams = static_cast<int>(rng.range(1, 3));
    std::vector<std::string> vars;
    for (int i = 0; i < nparams; ++i) vars.push_back(std::string(1, static_cast<char>('a' + i)));

    auto var = [&]() { return vars[static_cast<size_t>(rng.range(0, nparams - 1))]; };
    auto small = [&]() { return std::to_string(rng.range(-3, 3)); };
    auto expr = [&]() {
        switch (rng.range(0, 4)) {
            case 0: return small();
            case 1: return var();
            case 2: return var() + " + " + small();
            case 3: return var() + " - " + var();
            default: return var() + " * " + small();
        }
    };
    auto cmp = [&]() {
        static const char* ops[6] = {"==", "!=", "<", "<=", ">", ">="};
        return std::string(ops[rng.range(0, 5)]);
    };
    auto cond = [&]() { return var() + " " + cmp() + " " + expr(); };

    std::ostringstream os;
    if (rng.chance(60)) os << "requires " << var() << " " << cmp() << " " << small() << "\n";
    os << "ensures " << (rng.chance(50) ? std::string("result") : var()) << " " << cmp() << " "
       << expr() << "\n";
    os << "int f(";
    for (int i = 0; i < nparams; ++i) os << (i ? ", " : "") << "int " << vars[i];
    os << ") {\n";

    int nstmts = static_cast<int>(rng.range(1, 5));
    for (int i = 0; i < nstmts; ++i) {
        switch (rng.range(0, 4)) {
            case 0:
            case 1: os << "    " << var() << " = " << expr() << ";\n"; break;
            case 2:
                os << "    if (" << cond() << ")\n        " << var() << " = " << expr() << ";\n";
                if (rng.chance(40))
                    os << "    else\n        " << var() << " = " << expr() << ";\n";
                break;
            case 3: {
                std::string v = var();
                os << "    while (" << v << " > " << small() << ") {\n";
                // the loop variable only counts down, so every run terminates
                std::string w = var();
                if (w != v && rng.chance(60)) os << "        " << w << " = " << expr() << ";\n";
                os << "        " << v << " = " << v << " - 1;\n    }\n";
                break;
            }
            default: os << "    assert(" << cond() << ");\n"; break;
        }
    }
    os << "    return " << expr() << ";\n}\n";
    return os.str();
}

}  // namespace cpbpv::testing
