#pragma once

#include <algorithm>
#include <map>
#include <span>
#include <vector>

#include "cpbpv/interval.hpp"
#include "cpbpv/store.hpp"

namespace cpbpv {

// Inexpensive satisfiability layer. It checks an implied abstraction of the
// store: relational atoms over linear expressions feed (a) interval
// propagation, (b) conflict detection on merged identical linear forms, and
// (c) an ordering closure (SCC over <=/< edges; a strict edge or a
// disequality inside a strongly connected component is a contradiction).
// Disjunctions, implications and nonlinear atoms are abstracted to true, so
// the layer can answer Unsat or Unknown, never Sat.

struct LinTerm {
    int var;    // dense id
    i64 coeff;  // nonzero
};

/// lo <= sum(coeff*var) <= hi, and the sum differs from every value in `ne`.
struct LinAtom {
    std::vector<LinTerm> terms;  // sorted by var, canonical sign
    i64 lo = -kInf;
    i64 hi = kInf;
    std::vector<i64> ne;
};

namespace detail {

inline void canonicalize(LinAtom& a) {
    std::sort(a.terms.begin(), a.terms.end(),
              [](const LinTerm& x, const LinTerm& y) { return x.var < y.var; });
    if (!a.terms.empty() && a.terms.front().coeff < 0) {
        for (auto& t : a.terms) t.coeff = -t.coeff;
        i64 lo = a.lo == -kInf ? kInf : -a.lo;
        i64 hi = a.hi == kInf ? -kInf : -a.hi;
        std::swap(lo, hi);
        a.lo = lo;
        a.hi = hi;
        for (auto& v : a.ne) v = -v;
    }
    std::sort(a.ne.begin(), a.ne.end());
    a.ne.erase(std::unique(a.ne.begin(), a.ne.end()), a.ne.end());
}

/// Merges atoms with identical term vectors (bounds intersect, ne unions).
inline std::vector<LinAtom> merge_atoms(std::vector<LinAtom> atoms) {
    std::map<std::vector<std::pair<int, i64>>, size_t> index;
    std::vector<LinAtom> out;
    for (auto& a : atoms) {
        std::vector<std::pair<int, i64>> key;
        for (auto& t : a.terms) key.emplace_back(t.var, t.coeff);
        auto [it, fresh] = index.emplace(std::move(key), out.size());
        if (fresh) {
            out.push_back(std::move(a));
        } else {
            LinAtom& dst = out[it->second];
            dst.lo = std::max(dst.lo, a.lo);
            dst.hi = std::min(dst.hi, a.hi);
            dst.ne.insert(dst.ne.end(), a.ne.begin(), a.ne.end());
            std::sort(dst.ne.begin(), dst.ne.end());
            dst.ne.erase(std::unique(dst.ne.begin(), dst.ne.end()), dst.ne.end());
        }
    }
    return out;
}

// Tarjan strongly connected components over ordering edges.
class OrderScc {
public:
    explicit OrderScc(int n) : n_(n), adj_(n) {}

    void add_edge(int u, int v) { adj_[u].push_back(v); }  // u <= v

    std::vector<int> components() {
        comp_.assign(n_, -1);
        index_.assign(n_, -1);
        low_.assign(n_, 0);
        on_stack_.assign(n_, false);
        next_index_ = 0;
        n_comps_ = 0;
        for (int v = 0; v < n_; ++v)
            if (index_[v] < 0) strongconnect(v);
        return comp_;
    }

private:
    void strongconnect(int root) {
        // iterative Tarjan
        struct Frame {
            int v;
            size_t child;
        };
        std::vector<Frame> stack{{root, 0}};
        while (!stack.empty()) {
            auto& [v, child] = stack.back();
            if (child == 0) {
                index_[v] = low_[v] = next_index_++;
                scc_stack_.push_back(v);
                on_stack_[v] = true;
            }
            bool descended = false;
            while (child < adj_[v].size()) {
                int w = adj_[v][child++];
                if (index_[w] < 0) {
                    stack.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack_[w]) low_[v] = std::min(low_[v], index_[w]);
            }
            if (descended) continue;
            if (low_[v] == index_[v]) {
                int w;
                do {
                    w = scc_stack_.back();
                    scc_stack_.pop_back();
                    on_stack_[w] = false;
                    comp_[w] = n_comps_;
                } while (w != v);
                ++n_comps_;
            }
            int finished = v;
            stack.pop_back();
            if (!stack.empty())
                low_[stack.back().v] = std::min(low_[stack.back().v], low_[finished]);
        }
    }

    int n_;
    std::vector<std::vector<int>> adj_;
    std::vector<int> comp_, index_, low_;
    std::vector<bool> on_stack_;
    std::vector<int> scc_stack_;
    int next_index_ = 0, n_comps_ = 0;
};

}  // namespace detail

/// Fixpoint core shared by the standalone cheap check and the re-checks the
/// complete solver runs after each search decision.
/// Returns false iff the atom set with the given variable intervals is
/// definitely unsatisfiable. Intervals are tightened in place.
inline bool cheap_core(std::vector<LinAtom> atoms, std::vector<Interval>& iv,
                       int max_rounds = 256) {
    for (auto& a : atoms) detail::canonicalize(a);
    atoms = detail::merge_atoms(std::move(atoms));

    for (const auto& a : atoms) {
        if (a.terms.empty()) {
            // constant form: the sum is identically 0
            if (a.lo > 0 || a.hi < 0) return false;
            if (std::binary_search(a.ne.begin(), a.ne.end(), i64{0})) return false;
        }
        if (a.lo > a.hi) return false;
    }

    // interval fixpoint
    bool changed = true;
    for (int round = 0; round < max_rounds && changed; ++round) {
        changed = false;
        for (const auto& a : atoms) {
            if (a.terms.empty()) continue;
            i64 smin = 0, smax = 0;
            for (const auto& t : a.terms) {
                const Interval& d = iv[t.var];
                if (d.empty()) return false;
                smin = sat_add(smin, t.coeff > 0 ? sat_mul(t.coeff, d.lo) : sat_mul(t.coeff, d.hi));
                smax = sat_add(smax, t.coeff > 0 ? sat_mul(t.coeff, d.hi) : sat_mul(t.coeff, d.lo));
            }
            i64 alo = std::max(a.lo, smin), ahi = std::min(a.hi, smax);
            if (alo > ahi) return false;
            if (alo == ahi && std::binary_search(a.ne.begin(), a.ne.end(), alo)) return false;
            for (const auto& t : a.terms) {
                Interval& d = iv[t.var];
                i64 self_min = t.coeff > 0 ? sat_mul(t.coeff, d.lo) : sat_mul(t.coeff, d.hi);
                i64 self_max = t.coeff > 0 ? sat_mul(t.coeff, d.hi) : sat_mul(t.coeff, d.lo);
                i64 others_min = sat_sub(smin, self_min);
                i64 others_max = sat_sub(smax, self_max);
                i64 tlo = sat_sub(alo, others_max);  // bounds for coeff*var
                i64 thi = sat_sub(ahi, others_min);
                i64 nlo, nhi;
                if (t.coeff > 0) {
                    nlo = div_ceil(tlo, t.coeff);
                    nhi = div_floor(thi, t.coeff);
                } else {
                    nlo = div_ceil(thi, t.coeff);
                    nhi = div_floor(tlo, t.coeff);
                }
                if (nlo > d.lo) {
                    d.lo = nlo;
                    changed = true;
                }
                if (nhi < d.hi) {
                    d.hi = nhi;
                    changed = true;
                }
                if (d.empty()) return false;
            }
        }
    }

    // ordering closure over difference atoms x - y
    int n = static_cast<int>(iv.size());
    detail::OrderScc scc(n);
    struct StrictEdge {
        int u, v;
    };
    std::vector<StrictEdge> strict;
    std::vector<std::pair<int, int>> ne_pairs;
    for (const auto& a : atoms) {
        if (a.terms.size() != 2) continue;
        if (a.terms[0].coeff != 1 || a.terms[1].coeff != -1) continue;
        int x = a.terms[0].var, y = a.terms[1].var;  // form: x - y
        if (a.hi <= 0) {
            scc.add_edge(x, y);  // x <= y (+ slack)
            if (a.hi <= -1) strict.push_back({x, y});
        }
        if (a.lo >= 0) {
            scc.add_edge(y, x);
            if (a.lo >= 1) strict.push_back({y, x});
        }
        if (std::binary_search(a.ne.begin(), a.ne.end(), i64{0})) ne_pairs.emplace_back(x, y);
    }
    std::vector<int> comp = scc.components();
    for (const auto& e : strict)
        if (comp[e.u] == comp[e.v]) return false;
    for (const auto& [x, y] : ne_pairs)
        if (comp[x] == comp[y]) return false;

    return true;
}

// ---- conversion from solver constraints ----

/// Identity of a cheap-layer variable: a versioned scalar or a versioned
/// array cell with a literal index.
struct CheapKey {
    VarRef var;
    bool is_cell = false;
    i64 index = 0;

    bool operator<(const CheapKey& o) const {
        if (var < o.var) return true;
        if (o.var < var) return false;
        if (is_cell != o.is_cell) return is_cell < o.is_cell;
        return index < o.index;
    }
};

class CheapProblem {
public:
    explicit CheapProblem(int bits) : bits_(bits) {}

    /// Adds the usable atoms of `c`; nonlinear or disjunctive parts are
    /// skipped. Returns false if `c` contains a literal `false` conjunct.
    bool add(const SConPtr& c) { return collect(nnf(c)); }

    bool add_all(std::span<const SConPtr> cs) {
        for (const auto& c : cs)
            if (!add(c)) return false;
        return true;
    }

    /// Runs the core; false = definitely unsatisfiable.
    bool consistent() {
        std::vector<Interval> iv = seed_intervals();
        return cheap_core(atoms_, iv);
    }

    /// Tightened per-variable intervals (sound enclosure of the store's
    /// models); the full k-bit range when the key never appears.
    std::map<CheapKey, Interval> intervals() {
        std::vector<Interval> iv = seed_intervals();
        if (!cheap_core(atoms_, iv)) {
            // unsatisfiable store: any enclosure is sound, keep it small
            for (auto& d : iv) d = Interval::point(0);
        }
        std::map<CheapKey, Interval> out;
        for (const auto& [k, id] : ids_) out[k] = iv[id];
        return out;
    }

    /// Sound value enclosure of an arbitrary solver expression under the
    /// given interval map (k-bit defaults for unknown variables and for cells
    /// read through a non-literal index).
    Interval hull(const SExprPtr& e, const std::map<CheapKey, Interval>& iv) const {
        switch (e->kind) {
            case SExpr::Kind::Const: return Interval::point(e->value);
            case SExpr::Kind::Var: {
                auto it = iv.find(CheapKey{e->var, false, 0});
                return it == iv.end() ? kbit() : it->second;
            }
            case SExpr::Kind::Cell: {
                SExprPtr idx = e->a;
                if (idx->is_const()) {
                    auto it = iv.find(CheapKey{e->var, true, idx->value});
                    if (it != iv.end()) return it->second;
                }
                return kbit();
            }
            case SExpr::Kind::Add: return iv_add(hull(e->a, iv), hull(e->b, iv));
            case SExpr::Kind::Sub: return iv_sub(hull(e->a, iv), hull(e->b, iv));
            case SExpr::Kind::Mul: return iv_mul(hull(e->a, iv), hull(e->b, iv));
            case SExpr::Kind::Div: return iv_div(hull(e->a, iv), hull(e->b, iv));
        }
        return Interval::full();
    }

private:
    Interval kbit() const { return {min_value(bits_), max_value(bits_)}; }

    std::vector<Interval> seed_intervals() const {
        return std::vector<Interval>(ids_.size(), kbit());
    }

    int id_of(const CheapKey& k) {
        auto [it, fresh] = ids_.emplace(k, static_cast<int>(ids_.size()));
        return it->second;
    }

    // linear normal form: sum of coeff*key + constant
    struct Lin {
        std::map<CheapKey, i64> coeffs;
        i64 constant = 0;
    };

    std::optional<Lin> linearize(const SExprPtr& e) {
        switch (e->kind) {
            case SExpr::Kind::Const: {
                Lin l;
                l.constant = e->value;
                return l;
            }
            case SExpr::Kind::Var: {
                Lin l;
                l.coeffs[CheapKey{e->var, false, 0}] = 1;
                return l;
            }
            case SExpr::Kind::Cell: {
                if (!e->a->is_const()) return std::nullopt;  // element form: abstracted
                Lin l;
                l.coeffs[CheapKey{e->var, true, e->a->value}] = 1;
                return l;
            }
            case SExpr::Kind::Add:
            case SExpr::Kind::Sub: {
                auto a = linearize(e->a);
                auto b = linearize(e->b);
                if (!a || !b) return std::nullopt;
                i64 sign = e->kind == SExpr::Kind::Add ? 1 : -1;
                for (auto& [k, c] : b->coeffs) {
                    auto r = checked_add(a->coeffs[k], sign * c);
                    if (!r) return std::nullopt;
                    a->coeffs[k] = *r;
                }
                auto r = checked_add(a->constant, sign * b->constant);
                if (!r) return std::nullopt;
                a->constant = *r;
                return a;
            }
            case SExpr::Kind::Mul: {
                auto a = linearize(e->a);
                auto b = linearize(e->b);
                if (!a || !b) return std::nullopt;
                if (!a->coeffs.empty() && !b->coeffs.empty()) return std::nullopt;
                if (a->coeffs.empty()) std::swap(a, b);
                for (auto& [k, c] : a->coeffs) {
                    auto r = checked_mul(c, b->constant);
                    if (!r) return std::nullopt;
                    c = *r;
                }
                auto r = checked_mul(a->constant, b->constant);
                if (!r) return std::nullopt;
                a->constant = *r;
                return a;
            }
            case SExpr::Kind::Div: return std::nullopt;  // truncation is nonlinear
        }
        return std::nullopt;
    }

    bool collect(const SConPtr& c) {
        switch (c->kind) {
            case SCon::Kind::True: return true;
            case SCon::Kind::False: return false;
            case SCon::Kind::And: return collect(c->a) && collect(c->b);
            case SCon::Kind::Cmp: {
                auto a = linearize(c->e1);
                auto b = linearize(c->e2);
                if (!a || !b) return true;  // abstracted
                // form = e1 - e2, bounded against rhs constant
                Lin f = *a;
                for (auto& [k, cf] : b->coeffs) {
                    auto r = checked_sub(f.coeffs[k], cf);
                    if (!r) return true;
                    f.coeffs[k] = *r;
                }
                auto rc = checked_sub(f.constant, b->constant);
                if (!rc) return true;
                i64 cst = *rc;  // form value = sum coeffs + cst, relation vs 0
                LinAtom atom;
                for (auto& [k, cf] : f.coeffs)
                    if (cf != 0) atom.terms.push_back({id_of(k), cf});
                // sum coeffs ⊲ -cst
                i64 rhs;
                if (__builtin_sub_overflow(i64{0}, cst, &rhs)) return true;
                switch (c->op) {
                    case CmpOp::Eq: atom.lo = atom.hi = rhs; break;
                    case CmpOp::Ne: atom.ne.push_back(rhs); break;
                    case CmpOp::Le: atom.hi = rhs; break;
                    case CmpOp::Lt: atom.hi = sat_sub(rhs, 1); break;
                    case CmpOp::Ge: atom.lo = rhs; break;
                    case CmpOp::Gt: atom.lo = sat_add(rhs, 1); break;
                }
                atoms_.push_back(std::move(atom));
                return true;
            }
            default: return true;  // Or/Implies/Not(composite)/AllDiff: abstracted
        }
    }

    int bits_;
    std::map<CheapKey, int> ids_;
    std::vector<LinAtom> atoms_;
};

/// Verdict of the inexpensive layer: definitely-unsatisfiable or unknown.
enum class CheapVerdict { Unsat, Unknown };

inline CheapVerdict check_cheap_store(std::span<const SConPtr> store, int bits) {
    CheapProblem p(bits);
    if (!p.add_all(store)) return CheapVerdict::Unsat;
    return p.consistent() ? CheapVerdict::Unknown : CheapVerdict::Unsat;
}

}  // namespace cpbpv
