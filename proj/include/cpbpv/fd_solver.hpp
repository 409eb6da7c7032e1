#pragma once

#include <algorithm>
#include <cassert>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <vector>

#include "cpbpv/cheap_solver.hpp"
#include "cpbpv/interval.hpp"
#include "cpbpv/model.hpp"

namespace cpbpv {

// Finite-domain engine: trailed domains, propagation to fixpoint, depth-first
// labeling (smallest domain first, ascending values), disjunction handling by
// entailment watching plus search-time splitting. After every decision the
// inexpensive layer (interval/ordering closure) is re-run over the active
// atoms, including equalities degenerated from element constraints and fired
// frame guards.

/// Finite integer domain: interval plus removed interior values.
class Domain {
public:
    Domain() = default;
    Domain(i64 lo, i64 hi) : lo_(lo), hi_(hi) {}

    i64 lo() const { return lo_; }
    i64 hi() const { return hi_; }
    bool empty() const { return lo_ > hi_; }
    bool fixed() const { return lo_ == hi_; }
    i64 value() const { return lo_; }
    Interval hull() const { return {lo_, hi_}; }

    i64 size() const {
        if (empty()) return 0;
        return hi_ - lo_ + 1 - static_cast<i64>(holes_.size());
    }

    bool contains(i64 v) const {
        if (v < lo_ || v > hi_) return false;
        return !std::binary_search(holes_.begin(), holes_.end(), v);
    }

    // mutators return false when the domain became empty
    bool set_lo(i64 v) {
        if (v <= lo_) return !empty();
        lo_ = v;
        chop();
        return !empty();
    }

    bool set_hi(i64 v) {
        if (v >= hi_) return !empty();
        hi_ = v;
        chop();
        return !empty();
    }

    bool remove(i64 v) {
        if (!contains(v)) return !empty();
        if (v == lo_) {
            ++lo_;
            chop();
        } else if (v == hi_) {
            --hi_;
            chop();
        } else {
            holes_.insert(std::upper_bound(holes_.begin(), holes_.end(), v), v);
        }
        return !empty();
    }

    bool assign(i64 v) {
        if (!contains(v)) {
            lo_ = 1;
            hi_ = 0;
            return false;
        }
        lo_ = hi_ = v;
        holes_.clear();
        return true;
    }

    /// Smallest member >= v, or nullopt.
    std::optional<i64> next(i64 v) const {
        if (v < lo_) v = lo_;
        auto it = std::lower_bound(holes_.begin(), holes_.end(), v);
        while (it != holes_.end() && *it == v) {
            ++v;
            ++it;
        }
        if (v > hi_) return std::nullopt;
        return v;
    }

private:
    void chop() {  // restore: holes strictly inside (lo_, hi_)
        while (!holes_.empty() && holes_.front() <= lo_) {
            if (holes_.front() == lo_) ++lo_;
            holes_.erase(holes_.begin());
        }
        while (!holes_.empty() && holes_.back() >= hi_) {
            if (holes_.back() == hi_) --hi_;
            holes_.pop_back();
        }
        // lo_/hi_ moves can land on further holes
        while (!holes_.empty() && holes_.front() == lo_) {
            ++lo_;
            holes_.erase(holes_.begin());
        }
        while (!holes_.empty() && holes_.back() == hi_) {
            --hi_;
            holes_.pop_back();
        }
    }

    i64 lo_ = 0, hi_ = -1;
    std::vector<i64> holes_;
};

// ---- compiled constraint forms over dense variable ids ----

struct CTree {
    enum class Kind { Const, Var, Add, Sub, Mul, Div };
    Kind kind;
    i64 value = 0;
    int var = -1;
    std::shared_ptr<const CTree> a, b;
};
using CTreePtr = std::shared_ptr<const CTree>;

inline CTreePtr ct_const(i64 v) {
    auto t = std::make_shared<CTree>();
    t->kind = CTree::Kind::Const;
    t->value = v;
    return t;
}

inline CTreePtr ct_var(int id) {
    auto t = std::make_shared<CTree>();
    t->kind = CTree::Kind::Var;
    t->var = id;
    return t;
}

inline CTreePtr ct_bin(CTree::Kind k, CTreePtr a, CTreePtr b) {
    auto t = std::make_shared<CTree>();
    t->kind = k;
    t->a = std::move(a);
    t->b = std::move(b);
    return t;
}

struct CAtom {
    CmpOp op;
    CTreePtr lhs, rhs;
    std::vector<int> vars;              // distinct, sorted
    std::optional<LinAtom> lin;         // precompiled linear normal form
};

struct CElement {
    std::vector<int> cells;
    int idx;
    int val;
};

struct CAllDiff {
    std::vector<int> vars;
};

struct COr;

struct CItem {
    enum class Kind { Atom, Element, AllDiff, Or };
    Kind kind;
    std::shared_ptr<const CAtom> atom;
    std::shared_ptr<const CElement> element;
    std::shared_ptr<const CAllDiff> alldiff;
    std::shared_ptr<const COr> or_node;
};

struct CGroup {
    std::vector<CItem> items;
};

struct COr {
    int id = -1;  // index into the engine's or-state array
    bool split_eligible = false;  // disjunctions from the checked claim are split in search;
                                  // all others (e.g. frame guards) resolve by propagation/labeling
    std::vector<CGroup> groups;
};

// ---- engine ----

struct SearchStats {
    i64 decisions = 0;
    i64 propagations = 0;
    i64 order_rejects = 0;  // nodes cut by the re-run inexpensive layer
};

class FdEngine;

struct Propagator {
    virtual ~Propagator() = default;
    virtual bool run(FdEngine&) = 0;
};

class FdEngine {
public:
    explicit FdEngine(SearchStats& stats) : stats_(stats) {}

    // -- variables --

    int new_var(Interval init) {
        doms_.emplace_back(init.lo, init.hi);
        saved_at_.push_back(-1);
        subs_.emplace_back();
        return static_cast<int>(doms_.size() - 1);
    }

    int var_count() const { return static_cast<int>(doms_.size()); }
    const Domain& dom(int v) const { return doms_[v]; }

    bool set_lo(int v, i64 x) {
        if (x <= doms_[v].lo()) return true;
        save(v);
        bool ok = doms_[v].set_lo(x);
        touched(v);
        return ok;
    }

    bool set_hi(int v, i64 x) {
        if (x >= doms_[v].hi()) return true;
        save(v);
        bool ok = doms_[v].set_hi(x);
        touched(v);
        return ok;
    }

    bool clamp(int v, Interval t) { return set_lo(v, t.lo) && set_hi(v, t.hi); }

    bool remove(int v, i64 x) {
        if (!doms_[v].contains(x)) return !doms_[v].empty();
        save(v);
        bool ok = doms_[v].remove(x);
        touched(v);
        return ok;
    }

    bool assign(int v, i64 x) {
        if (doms_[v].fixed() && doms_[v].value() == x) return true;
        save(v);
        bool ok = doms_[v].assign(x);
        touched(v);
        return ok;
    }

    // -- propagators --
    // One pool; propagators added below the root level are trailed away on
    // backtrack together with their subscriptions.

    void add_prop(std::unique_ptr<Propagator> p, const std::vector<int>& watch_vars) {
        int id = static_cast<int>(props_.size());
        props_.push_back(std::move(p));
        in_queue_.push_back(false);
        for (int v : watch_vars) {
            subs_[v].push_back(id);
            subs_log_.push_back(v);
        }
        enqueue(id);
        ++change_count_;
    }

    /// Re-invocation of the cheaper layer while the finite-domain solver
    /// works: checked every `probe_interval_` propagator runs, so contradictions
    /// the ordering layer can see do not have to be walked out bound-by-bound.
    void set_probe(std::function<bool()> probe, int interval = 256) {
        probe_ = std::move(probe);
        probe_interval_ = interval;
    }

    bool propagate() {
        int since_probe = 0;
        while (!queue_.empty()) {
            int id = queue_.front();
            queue_.pop_front();
            in_queue_[id] = false;
            ++stats_.propagations;
            if (!props_[id]->run(*this)) return false;
            if (probe_ && ++since_probe >= probe_interval_) {
                since_probe = 0;
                if (!probe_()) return false;
            }
        }
        return true;
    }

    // -- or-node state --

    int register_or_nodes(int count) {
        int base = static_cast<int>(or_state_.size());
        or_state_.resize(base + count, kOpen);
        return base;
    }

    static constexpr int kOpen = -1;
    static constexpr int kSatisfied = -2;

    int or_state(int id) const { return or_state_[id]; }

    void set_or_state(int id, int st) {
        or_trail_.push_back({id, or_state_[id]});
        or_state_[id] = st;
        ++change_count_;
    }

    // active atoms/elements feed the per-decision ordering re-check
    void note_active_atom(std::shared_ptr<const CAtom> a) { active_atoms_.push_back(std::move(a)); }
    void note_active_element(std::shared_ptr<const CElement> e) {
        active_elements_.push_back(std::move(e));
    }
    const std::vector<std::shared_ptr<const CAtom>>& active_atoms() const { return active_atoms_; }
    const std::vector<std::shared_ptr<const CElement>>& active_elements() const {
        return active_elements_;
    }

    // open disjunctions eligible for search splitting
    void note_active_or(std::shared_ptr<const COr> n) { active_ors_.push_back(std::move(n)); }
    const std::vector<std::shared_ptr<const COr>>& active_ors() const { return active_ors_; }

    // labeling candidates
    void mark_relevant(int v) {
        if (relevant_flag_.size() < doms_.size()) relevant_flag_.resize(doms_.size(), false);
        if (relevant_flag_[v]) return;
        relevant_flag_[v] = true;
        relevant_.push_back(v);
    }
    const std::vector<int>& relevant_vars() const { return relevant_; }

    // -- trail --

    void push_level() {
        ++level_;
        marks_.push_back({trail_.size(), props_.size(), subs_log_.size(), or_trail_.size(),
                          active_atoms_.size(), active_elements_.size(), active_ors_.size(),
                          relevant_.size()});
    }

    void backtrack() {
        Mark m = marks_.back();
        marks_.pop_back();
        while (trail_.size() > m.trail) {
            auto& e = trail_.back();
            doms_[e.var] = std::move(e.saved);
            saved_at_[e.var] = e.prev_saved_at;
            trail_.pop_back();
        }
        while (subs_log_.size() > m.subs_log) {
            subs_[subs_log_.back()].pop_back();
            subs_log_.pop_back();
        }
        props_.resize(m.props);
        while (or_trail_.size() > m.or_trail) {
            auto& e = or_trail_.back();
            or_state_[e.first] = e.second;
            or_trail_.pop_back();
        }
        active_atoms_.resize(m.active_atoms);
        active_elements_.resize(m.active_elements);
        active_ors_.resize(m.active_ors);
        while (relevant_.size() > m.relevant) {
            relevant_flag_[relevant_.back()] = false;
            relevant_.pop_back();
        }
        --level_;
        queue_.clear();
        in_queue_.resize(props_.size());
        std::fill(in_queue_.begin(), in_queue_.end(), false);
    }

    void wake_all() {
        for (size_t id = 0; id < props_.size(); ++id) enqueue(static_cast<int>(id));
    }

    SearchStats& stats() { return stats_; }

private:
    struct TrailEntry {
        int var;
        int prev_saved_at;
        Domain saved;
    };
    struct Mark {
        size_t trail, props, subs_log, or_trail, active_atoms, active_elements, active_ors,
            relevant;
    };

    void save(int v) {
        if (saved_at_[v] == level_) return;
        trail_.push_back({v, saved_at_[v], doms_[v]});
        saved_at_[v] = level_;
    }

    void touched(int v) {
        ++change_count_;
        for (int id : subs_[v]) enqueue(id);
    }

    void enqueue(int id) {
        if (!in_queue_[id]) {
            in_queue_[id] = true;
            queue_.push_back(id);
        }
    }

    SearchStats& stats_;
    std::vector<Domain> doms_;
    std::vector<int> saved_at_;
    std::vector<std::vector<int>> subs_;
    std::vector<std::unique_ptr<Propagator>> props_;
    std::vector<bool> in_queue_;
    std::deque<int> queue_;
    std::vector<int> subs_log_;
    std::vector<int> or_state_;
    std::vector<std::pair<int, int>> or_trail_;
    std::vector<std::shared_ptr<const CAtom>> active_atoms_;
    std::vector<std::shared_ptr<const CElement>> active_elements_;
    std::vector<std::shared_ptr<const COr>> active_ors_;
    std::vector<int> relevant_;
    std::vector<bool> relevant_flag_;
    std::vector<TrailEntry> trail_;
    std::vector<Mark> marks_;
    int level_ = 0;
    std::uint64_t change_count_ = 0;
    std::function<bool()> probe_;
    int probe_interval_ = 256;
};

// ---- interval evaluation over compiled trees ----

inline Interval ct_hull(const CTreePtr& t, const FdEngine& e, int pin_var = -1,
                        i64 pin_value = 0) {
    switch (t->kind) {
        case CTree::Kind::Const: return Interval::point(t->value);
        case CTree::Kind::Var:
            if (t->var == pin_var) return Interval::point(pin_value);
            return e.dom(t->var).hull();
        case CTree::Kind::Add: return iv_add(ct_hull(t->a, e, pin_var, pin_value), ct_hull(t->b, e, pin_var, pin_value));
        case CTree::Kind::Sub: return iv_sub(ct_hull(t->a, e, pin_var, pin_value), ct_hull(t->b, e, pin_var, pin_value));
        case CTree::Kind::Mul: return iv_mul(ct_hull(t->a, e, pin_var, pin_value), ct_hull(t->b, e, pin_var, pin_value));
        case CTree::Kind::Div: return iv_div(ct_hull(t->a, e, pin_var, pin_value), ct_hull(t->b, e, pin_var, pin_value));
    }
    return Interval::full();
}

/// Three-valued truth of an atom under current interval hulls.
inline std::optional<bool> atom_status(const CAtom& a, const FdEngine& e) {
    Interval l = ct_hull(a.lhs, e), r = ct_hull(a.rhs, e);
    if (l.empty() || r.empty()) return false;  // unsupported operand
    switch (a.op) {
        case CmpOp::Eq:
            if (l.fixed() && r.fixed()) return l.lo == r.lo;
            if (meet(l, r).empty()) return false;
            return std::nullopt;
        case CmpOp::Ne:
            if (l.fixed() && r.fixed()) return l.lo != r.lo;
            if (meet(l, r).empty()) return true;
            return std::nullopt;
        case CmpOp::Le:
            if (l.hi <= r.lo) return true;
            if (l.lo > r.hi) return false;
            return std::nullopt;
        case CmpOp::Lt:
            if (l.hi < r.lo) return true;
            if (l.lo >= r.hi) return false;
            return std::nullopt;
        case CmpOp::Ge:
            if (l.lo >= r.hi) return true;
            if (l.hi < r.lo) return false;
            return std::nullopt;
        case CmpOp::Gt:
            if (l.lo > r.hi) return true;
            if (l.hi <= r.lo) return false;
            return std::nullopt;
    }
    return std::nullopt;
}

/// Projection of a factor in x*y ⊆ T given the other factor's hull
/// (outward-rounded rational division; sound, possibly loose).
inline Interval iv_mul_proj(Interval T, Interval other) {
    if (T.empty() || other.empty()) return Interval::none();
    bool other_has_zero = other.contains(0);
    if (other_has_zero && T.contains(0)) return Interval::full();
    Interval out = Interval::none();
    auto region = [&](i64 c, i64 d) {  // divisor sign-region [c,d], 0 not inside
        if (c > d) return;
        i64 cands[4] = {div_floor(T.lo, c), div_floor(T.lo, d), div_floor(T.hi, c),
                        div_floor(T.hi, d)};
        i64 lo = *std::min_element(cands, cands + 4);
        i64 cands2[4] = {div_ceil(T.lo, c), div_ceil(T.lo, d), div_ceil(T.hi, c),
                         div_ceil(T.hi, d)};
        i64 hi = *std::max_element(cands2, cands2 + 4);
        out = join(out, Interval{lo, hi});
    };
    region(std::max(other.lo, i64{1}), other.hi);
    region(other.lo, std::min(other.hi, i64{-1}));
    return out;
}

const int kValueFilterLimit = 64;

class AtomProp : public Propagator {
public:
    explicit AtomProp(std::shared_ptr<const CAtom> a) : a_(std::move(a)) {}

    bool run(FdEngine& e) override {
        Interval l = ct_hull(a_->lhs, e), r = ct_hull(a_->rhs, e);
        if (l.empty() || r.empty()) return false;
        Interval lt = l, rt = r;  // target intervals after the relation
        switch (a_->op) {
            case CmpOp::Eq: {
                Interval m = meet(l, r);
                if (m.empty()) return false;
                lt = rt = m;
                break;
            }
            case CmpOp::Le:
                lt = meet(l, {-kInf, r.hi});
                rt = meet(r, {l.lo, kInf});
                break;
            case CmpOp::Lt:
                lt = meet(l, {-kInf, sat_sub(r.hi, 1)});
                rt = meet(r, {sat_add(l.lo, 1), kInf});
                break;
            case CmpOp::Ge:
                lt = meet(l, {r.lo, kInf});
                rt = meet(r, {-kInf, l.hi});
                break;
            case CmpOp::Gt:
                lt = meet(l, {sat_add(r.lo, 1), kInf});
                rt = meet(r, {-kInf, sat_sub(l.hi, 1)});
                break;
            case CmpOp::Ne: {
                if (l.fixed() && r.fixed() && l.lo == r.lo) return false;
                if (l.fixed() && a_->rhs->kind == CTree::Kind::Var) {
                    if (!e.remove(a_->rhs->var, l.lo)) return false;
                }
                if (r.fixed() && a_->lhs->kind == CTree::Kind::Var) {
                    if (!e.remove(a_->lhs->var, r.lo)) return false;
                }
                return filter(e);
            }
        }
        if (lt.empty() || rt.empty()) return false;
        if (!project(e, a_->lhs, lt)) return false;
        if (!project(e, a_->rhs, rt)) return false;
        return filter(e);
    }

private:
    // pushes a target interval down an expression tree
    bool project(FdEngine& e, const CTreePtr& t, Interval target) const {
        switch (t->kind) {
            case CTree::Kind::Const: return target.contains(t->value);
            case CTree::Kind::Var: return e.clamp(t->var, target);
            case CTree::Kind::Add: {
                Interval fa = ct_hull(t->a, e), fb = ct_hull(t->b, e);
                return project(e, t->a, meet(fa, iv_sub(target, fb))) &&
                       project(e, t->b, meet(fb, iv_sub(target, ct_hull(t->a, e))));
            }
            case CTree::Kind::Sub: {
                Interval fa = ct_hull(t->a, e), fb = ct_hull(t->b, e);
                return project(e, t->a, meet(fa, iv_add(target, fb))) &&
                       project(e, t->b, meet(fb, iv_sub(ct_hull(t->a, e), target)));
            }
            case CTree::Kind::Mul: {
                Interval fa = ct_hull(t->a, e), fb = ct_hull(t->b, e);
                return project(e, t->a, meet(fa, iv_mul_proj(target, fb))) &&
                       project(e, t->b, meet(fb, iv_mul_proj(target, ct_hull(t->a, e))));
            }
            case CTree::Kind::Div: {
                // target = trunc(a/b): a within target*b plus remainder slack;
                // 0 is removed from a plain-variable divisor.
                if (t->b->kind == CTree::Kind::Var) {
                    if (!e.remove(t->b->var, 0)) return false;
                }
                Interval fb = ct_hull(t->b, e);
                if (fb.contains(0)) {
                    if (fb.lo == 0) fb.lo = 1;
                    if (fb.hi == 0) fb.hi = -1;
                    if (fb.lo == 0 || fb.hi == 0 || fb.empty()) return !fb.empty();
                }
                i64 abs_lo = fb.lo < 0 ? -fb.lo : fb.lo;
                i64 abs_hi = fb.hi < 0 ? -fb.hi : fb.hi;
                i64 slack = std::max(std::max(abs_lo, abs_hi) - 1, i64{0});
                Interval prod = iv_mul(target, fb);
                Interval at = {sat_sub(prod.lo, slack), sat_add(prod.hi, slack)};
                return project(e, t->a, meet(ct_hull(t->a, e), at));
            }
        }
        return true;
    }

    // value filtering for small-domain atoms over at most two variables
    bool filter(FdEngine& e) const {
        if (a_->vars.size() > 2) return true;
        for (int v : a_->vars)
            if (e.dom(v).size() > kValueFilterLimit) return true;
        for (int v : a_->vars) {
            std::vector<i64> drop;
            std::optional<i64> x = e.dom(v).next(e.dom(v).lo());
            while (x) {
                Interval l = ct_hull(a_->lhs, e, v, *x);
                Interval r = ct_hull(a_->rhs, e, v, *x);
                bool possible = !l.empty() && !r.empty();
                if (possible) {
                    switch (a_->op) {
                        case CmpOp::Eq: possible = !meet(l, r).empty(); break;
                        case CmpOp::Ne: possible = !(l.fixed() && r.fixed() && l.lo == r.lo); break;
                        case CmpOp::Le: possible = l.lo <= r.hi; break;
                        case CmpOp::Lt: possible = l.lo < r.hi; break;
                        case CmpOp::Ge: possible = l.hi >= r.lo; break;
                        case CmpOp::Gt: possible = l.hi > r.lo; break;
                    }
                }
                if (!possible) drop.push_back(*x);
                x = e.dom(v).next(*x + 1);
            }
            for (i64 d : drop)
                if (!e.remove(v, d)) return false;
        }
        return true;
    }

    std::shared_ptr<const CAtom> a_;
};

class ElementProp : public Propagator {
public:
    explicit ElementProp(std::shared_ptr<const CElement> el) : el_(std::move(el)) {}

    bool run(FdEngine& e) override {
        int n = static_cast<int>(el_->cells.size());
        if (!e.set_lo(el_->idx, 0) || !e.set_hi(el_->idx, n - 1)) return false;
        const Domain& vd = e.dom(el_->val);

        // drop indices whose cell cannot meet the value
        std::vector<i64> drop;
        std::optional<i64> j = e.dom(el_->idx).next(e.dom(el_->idx).lo());
        Interval union_hull = Interval::none();
        while (j) {
            const Domain& cd = e.dom(el_->cells[*j]);
            Interval m = meet(cd.hull(), vd.hull());
            bool ok = !m.empty();
            if (ok && vd.fixed()) ok = cd.contains(vd.value());
            if (ok && cd.fixed()) ok = vd.contains(cd.value());
            if (!ok)
                drop.push_back(*j);
            else
                union_hull = join(union_hull, cd.hull());
            j = e.dom(el_->idx).next(*j + 1);
        }
        for (i64 d : drop)
            if (!e.remove(el_->idx, d)) return false;
        if (e.dom(el_->idx).empty()) return false;
        if (union_hull.empty()) return false;
        if (!e.clamp(el_->val, union_hull)) return false;

        // fixed index degenerates to equality between value and cell
        if (e.dom(el_->idx).fixed()) {
            int cell = el_->cells[e.dom(el_->idx).value()];
            Interval m = meet(e.dom(cell).hull(), e.dom(el_->val).hull());
            if (m.empty()) return false;
            if (!e.clamp(cell, m) || !e.clamp(el_->val, m)) return false;
            if (e.dom(cell).fixed() && !e.assign(el_->val, e.dom(cell).value())) return false;
            if (e.dom(el_->val).fixed() && !e.assign(cell, e.dom(el_->val).value())) return false;
        }
        return true;
    }

private:
    std::shared_ptr<const CElement> el_;
};

/// Candidate-count (Hall-style) test: false iff fewer distinct candidate
/// values remain than variables needing them.
inline bool alldiff_count_ok(const std::vector<int>& vars, const FdEngine& e) {
    i64 n = static_cast<i64>(vars.size());
    i64 lo = kInf, hi = -kInf;
    for (int v : vars) {
        lo = std::min(lo, e.dom(v).lo());
        hi = std::max(hi, e.dom(v).hi());
    }
    if (hi - lo + 1 >= n && hi - lo + 1 > 4096) return true;  // hull already wide enough
    std::set<i64> values;
    for (int v : vars) {
        std::optional<i64> x = e.dom(v).next(e.dom(v).lo());
        while (x) {
            values.insert(*x);
            if (static_cast<i64>(values.size()) >= n) return true;
            x = e.dom(v).next(*x + 1);
        }
    }
    return static_cast<i64>(values.size()) >= n;
}

class AllDiffProp : public Propagator {
public:
    explicit AllDiffProp(std::shared_ptr<const CAllDiff> ad) : ad_(std::move(ad)) {}

    bool run(FdEngine& e) override {
        // fixed values are removed from the other domains
        std::set<i64> fixed;
        for (int v : ad_->vars) {
            if (!e.dom(v).fixed()) continue;
            i64 x = e.dom(v).value();
            if (!fixed.insert(x).second) return false;
        }
        for (int v : ad_->vars) {
            if (e.dom(v).fixed()) continue;
            for (i64 x : fixed)
                if (!e.remove(v, x)) return false;
        }
        return alldiff_count_ok(ad_->vars, e);
    }

private:
    std::shared_ptr<const CAllDiff> ad_;
};

// group status evaluation (conservative three-valued)
inline std::optional<bool> group_status(const CGroup& g, const FdEngine& e);

inline std::optional<bool> item_status(const CItem& it, const FdEngine& e) {
    switch (it.kind) {
        case CItem::Kind::Atom: return atom_status(*it.atom, e);
        case CItem::Kind::Element: {
            const CElement& el = *it.element;
            int n = static_cast<int>(el.cells.size());
            Interval id = e.dom(el.idx).hull();
            bool any = false, all_fixed_eq = true;
            for (i64 j = std::max(id.lo, i64{0}); j <= std::min(id.hi, i64{n - 1}); ++j) {
                if (!e.dom(el.idx).contains(j)) continue;
                Interval m = meet(e.dom(el.cells[j]).hull(), e.dom(el.val).hull());
                if (!m.empty()) any = true;
                if (!(e.dom(el.cells[j]).fixed() && e.dom(el.val).fixed() &&
                      e.dom(el.cells[j]).value() == e.dom(el.val).value()))
                    all_fixed_eq = false;
            }
            if (!any) return false;
            if (all_fixed_eq && e.dom(el.idx).fixed()) return true;
            return std::nullopt;
        }
        case CItem::Kind::AllDiff: {
            const CAllDiff& ad = *it.alldiff;
            std::set<i64> fixed;
            bool all_fixed = true;
            for (int v : ad.vars) {
                if (e.dom(v).fixed()) {
                    if (!fixed.insert(e.dom(v).value()).second) return false;
                } else {
                    all_fixed = false;
                }
            }
            if (all_fixed) return true;
            if (!alldiff_count_ok(ad.vars, e)) return false;
            return std::nullopt;
        }
        case CItem::Kind::Or: {
            bool all_refuted = true;
            for (const auto& g : it.or_node->groups) {
                auto s = group_status(g, e);
                if (s && *s) return true;
                if (!s || *s) all_refuted = false;
            }
            if (all_refuted) return false;
            return std::nullopt;
        }
    }
    return std::nullopt;
}

inline std::optional<bool> group_status(const CGroup& g, const FdEngine& e) {
    bool all_true = true;
    for (const auto& it : g.items) {
        auto s = item_status(it, e);
        if (s && !*s) return false;
        if (!s || !*s) all_true = false;
    }
    if (all_true) return true;
    return std::nullopt;
}

inline void activate_group(const CGroup& g, FdEngine& e);

inline void item_watch_vars(const CItem& it, std::set<int>& out) {
    switch (it.kind) {
        case CItem::Kind::Atom:
            out.insert(it.atom->vars.begin(), it.atom->vars.end());
            return;
        case CItem::Kind::Element:
            out.insert(it.element->cells.begin(), it.element->cells.end());
            out.insert(it.element->idx);
            out.insert(it.element->val);
            return;
        case CItem::Kind::AllDiff:
            out.insert(it.alldiff->vars.begin(), it.alldiff->vars.end());
            return;
        case CItem::Kind::Or:
            for (const auto& g : it.or_node->groups)
                for (const auto& sub : g.items) item_watch_vars(sub, out);
            return;
    }
}

inline std::vector<int> item_watch_list(const CItem& it) {
    std::set<int> w;
    item_watch_vars(it, w);
    return {w.begin(), w.end()};
}

/// Watches a disjunction: drops it once a disjunct is entailed, fails when
/// all are refuted, and activates the single survivor when one remains.
struct OrProp : Propagator {
    explicit OrProp(std::shared_ptr<const COr> node) : node(std::move(node)) {}

    bool run(FdEngine& e) override {
        int st = e.or_state(node->id);
        if (st != FdEngine::kOpen) return true;
        int candidate = -1, candidates = 0;
        for (size_t g = 0; g < node->groups.size(); ++g) {
            auto s = group_status(node->groups[g], e);
            if (s && *s) {
                e.set_or_state(node->id, FdEngine::kSatisfied);
                return true;
            }
            if (!s) {
                ++candidates;
                if (candidate < 0) candidate = static_cast<int>(g);
            }
        }
        if (candidates == 0) return false;
        if (candidates == 1) {
            e.set_or_state(node->id, candidate);
            activate_group(node->groups[candidate], e);
        }
        return true;
    }

    std::shared_ptr<const COr> node;
};

inline void activate_item(const CItem& it, FdEngine& e) {
    std::vector<int> watch = item_watch_list(it);
    switch (it.kind) {
        case CItem::Kind::Atom:
            e.note_active_atom(it.atom);
            for (int v : it.atom->vars) e.mark_relevant(v);
            e.add_prop(std::make_unique<AtomProp>(it.atom), watch);
            break;
        case CItem::Kind::Element:
            e.note_active_element(it.element);
            e.mark_relevant(it.element->idx);
            e.mark_relevant(it.element->val);
            e.add_prop(std::make_unique<ElementProp>(it.element), watch);
            break;
        case CItem::Kind::AllDiff:
            for (int v : it.alldiff->vars) e.mark_relevant(v);
            e.add_prop(std::make_unique<AllDiffProp>(it.alldiff), watch);
            break;
        case CItem::Kind::Or:
            e.note_active_or(it.or_node);
            e.add_prop(std::make_unique<OrProp>(it.or_node), watch);
            break;
    }
}

inline void activate_group(const CGroup& g, FdEngine& e) {
    for (const auto& it : g.items) activate_item(it, e);
}

}  // namespace cpbpv
