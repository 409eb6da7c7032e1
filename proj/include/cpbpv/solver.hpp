#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <unordered_map>
#include <span>
#include <string>
#include <vector>

#include "cpbpv/fd_solver.hpp"

namespace cpbpv {

// Satisfiability of constraint stores via an ordered solver sequence: the
// interval/ordering layer (sound for Unsat only), then the complete
// finite-domain solver. The cheap layer is re-invoked after every search
// decision of the complete solver.

enum class VerdictKind { Sat, Unsat, Unknown };

struct Verdict {
    VerdictKind kind;
    Model model;  // meaningful iff kind == Sat

    bool sat() const { return kind == VerdictKind::Sat; }
    bool unsat() const { return kind == VerdictKind::Unsat; }
};

struct SolverConfig {
    enum class Layer { IntervalOrder, FiniteDomain };
    enum class Heuristic { SmallestDomainFirst };

    std::vector<Layer> sequence{Layer::IntervalOrder, Layer::FiniteDomain};
    int bits = 8;
    Heuristic heuristic = Heuristic::SmallestDomainFirst;
    i64 node_budget = 10'000'000;
    std::map<std::string, i64> array_lengths;  // needed for element and model assembly

    void validate() const {
        if (bits < 2 || bits > 31) throw VerifyError("bit width must be in [2, 31]");
        if (sequence.empty() || sequence.back() != Layer::FiniteDomain)
            throw VerifyError("the last solver in the sequence must be the finite-domain solver");
    }
};

struct SolverStats {
    i64 cheap_calls = 0;
    i64 cheap_unsat = 0;
    i64 complete_calls = 0;
    SearchStats search;

    SolverStats& operator+=(const SolverStats& o) {
        cheap_calls += o.cheap_calls;
        cheap_unsat += o.cheap_unsat;
        complete_calls += o.complete_calls;
        search.decisions += o.search.decisions;
        search.propagations += o.search.propagations;
        search.order_rejects += o.search.order_rejects;
        return *this;
    }
};

namespace detail {

struct CompileInfeasible {};

/// Lowers a constraint conjunction to the dense-variable compiled form.
class Compiler {
public:
    Compiler(int bits, const std::map<std::string, i64>& lengths)
        : bits_(bits), lengths_(lengths) {}

    bool infeasible = false;
    CGroup root;
    std::vector<std::shared_ptr<const COr>> ors;

    void add(const SConPtr& c, bool split_eligible = false) {
        if (infeasible) return;
        split_eligible_ = split_eligible;
        try {
            compile_con(nnf(c), root, root_elems_);
        } catch (const CompileInfeasible&) {
            infeasible = true;
        }
    }

    int var_count() const { return next_var_; }

    Interval kbit() const { return {min_value(bits_), max_value(bits_)}; }

    const std::map<VarRef, int>& scalar_ids() const { return scalar_ids_; }
    const std::map<std::pair<VarRef, i64>, int>& cell_ids() const { return cell_ids_; }
    const std::map<VarRef, std::vector<int>>& arrays() const { return array_cells_; }

    Model assemble_model(const FdEngine& e) const {
        Model m;
        auto value_of = [&](int id) { return e.dom(id).lo(); };  // unfixed: smallest remaining
        for (const auto& [ref, id] : scalar_ids_) m.scalars[ref] = value_of(id);
        std::map<VarRef, i64> extent;
        for (const auto& [key, id] : cell_ids_)
            extent[key.first] = std::max(extent[key.first], key.second + 1);
        for (const auto& [ref, cells] : array_cells_)
            extent[ref] = std::max(extent[ref], static_cast<i64>(cells.size()));
        for (const auto& [ref, n] : extent) {
            std::vector<i64> xs(static_cast<size_t>(n), 0);
            for (i64 i = 0; i < n; ++i) {
                auto it = cell_ids_.find({ref, i});
                if (it != cell_ids_.end()) xs[static_cast<size_t>(i)] = value_of(it->second);
            }
            m.arrays[ref] = std::move(xs);
        }
        return m;
    }

private:
    int new_var() {
        ++next_var_;
        return next_var_ - 1;
    }

    int scalar_id(const VarRef& v) {
        auto [it, fresh] = scalar_ids_.emplace(v, next_var_);
        if (fresh) new_var();
        return it->second;
    }

    int cell_id(const VarRef& a, i64 idx) {
        auto [it, fresh] = cell_ids_.emplace(std::make_pair(a, idx), next_var_);
        if (fresh) new_var();
        return it->second;
    }

    const std::vector<int>& materialize(const VarRef& a, i64 length) {
        auto it = array_cells_.find(a);
        if (it != array_cells_.end()) return it->second;
        std::vector<int> cells;
        cells.reserve(static_cast<size_t>(length));
        for (i64 i = 0; i < length; ++i) cells.push_back(cell_id(a, i));
        return array_cells_.emplace(a, std::move(cells)).first->second;
    }

    i64 length_of(const VarRef& a) {
        auto it = lengths_.find(a.name);
        if (it == lengths_.end())
            throw VerifyError("no declared length for array '" + a.name +
                              "' (needed for a variable-index access)");
        return it->second;
    }

    CTreePtr compile_expr(const SExprPtr& e, CGroup& g, std::set<std::string>& group_elems) {
        switch (e->kind) {
            case SExpr::Kind::Const: return ct_const(e->value);
            case SExpr::Kind::Var: return ct_var(scalar_id(e->var));
            case SExpr::Kind::Cell: {
                if (e->a->is_const()) {
                    i64 idx = e->a->value;
                    auto ln = lengths_.find(e->var.name);
                    if (idx < 0 || (ln != lengths_.end() && idx >= ln->second))
                        throw CompileInfeasible{};  // read outside the array: unsupported
                    return ct_var(cell_id(e->var, idx));
                }
                i64 len = length_of(e->var);
                std::string key = to_string(e);
                auto found = read_aux_.find(key);
                int val_id, idx_id;
                bool need_idx_def = false;
                CTreePtr idx_tree;
                if (found == read_aux_.end()) {
                    if (e->a->kind == SExpr::Kind::Var) {
                        idx_id = scalar_id(e->a->var);
                    } else {
                        idx_tree = compile_expr(e->a, g, group_elems);
                        idx_id = new_var();
                        need_idx_def = true;
                    }
                    val_id = new_var();
                    read_aux_[key] = {val_id, idx_id};
                    if (need_idx_def) idx_defs_[key] = idx_tree;
                } else {
                    val_id = found->second.first;
                    idx_id = found->second.second;
                    auto d = idx_defs_.find(key);
                    if (d != idx_defs_.end()) {
                        idx_tree = d->second;
                        need_idx_def = true;
                    }
                }
                if (!group_elems.count(key)) {
                    group_elems.insert(key);
                    if (need_idx_def)
                        push_atom(g, CmpOp::Eq, ct_var(idx_id), idx_tree);
                    auto el = std::make_shared<CElement>();
                    el->cells = materialize(e->var, len);
                    el->idx = idx_id;
                    el->val = val_id;
                    CItem item;
                    item.kind = CItem::Kind::Element;
                    item.element = std::move(el);
                    g.items.push_back(std::move(item));
                }
                return ct_var(val_id);
            }
            default: {
                auto k = e->kind == SExpr::Kind::Add   ? CTree::Kind::Add
                         : e->kind == SExpr::Kind::Sub ? CTree::Kind::Sub
                         : e->kind == SExpr::Kind::Mul ? CTree::Kind::Mul
                                                       : CTree::Kind::Div;
                CTreePtr a = compile_expr(e->a, g, group_elems);
                CTreePtr b = compile_expr(e->b, g, group_elems);
                if (e->kind == SExpr::Kind::Div && b->kind == CTree::Kind::Const && b->value == 0)
                    throw CompileInfeasible{};  // division by literal zero: unsupported
                return ct_bin(k, std::move(a), std::move(b));
            }
        }
    }

    static void tree_vars(const CTreePtr& t, std::set<int>& out) {
        if (!t) return;
        if (t->kind == CTree::Kind::Var) out.insert(t->var);
        tree_vars(t->a, out);
        tree_vars(t->b, out);
    }

    // linear normal form of lhs-rhs, for the ordering re-checks
    static std::optional<std::pair<std::map<int, i64>, i64>> linearize(const CTreePtr& t) {
        switch (t->kind) {
            case CTree::Kind::Const: return std::make_pair(std::map<int, i64>{}, t->value);
            case CTree::Kind::Var: {
                std::map<int, i64> m;
                m[t->var] = 1;
                return std::make_pair(std::move(m), i64{0});
            }
            case CTree::Kind::Add:
            case CTree::Kind::Sub: {
                auto a = linearize(t->a);
                auto b = linearize(t->b);
                if (!a || !b) return std::nullopt;
                i64 s = t->kind == CTree::Kind::Add ? 1 : -1;
                for (auto& [v, c] : b->first) {
                    auto r = checked_add(a->first[v], s * c);
                    if (!r) return std::nullopt;
                    a->first[v] = *r;
                }
                auto r = checked_add(a->second, s * b->second);
                if (!r) return std::nullopt;
                a->second = *r;
                return a;
            }
            case CTree::Kind::Mul: {
                auto a = linearize(t->a);
                auto b = linearize(t->b);
                if (!a || !b) return std::nullopt;
                if (!a->first.empty() && !b->first.empty()) return std::nullopt;
                if (a->first.empty()) std::swap(a, b);
                for (auto& [v, c] : a->first) {
                    auto r = checked_mul(c, b->second);
                    if (!r) return std::nullopt;
                    c = *r;
                }
                auto r = checked_mul(a->second, b->second);
                if (!r) return std::nullopt;
                a->second = *r;
                return a;
            }
            case CTree::Kind::Div: return std::nullopt;
        }
        return std::nullopt;
    }

    void push_atom(CGroup& g, CmpOp op, CTreePtr lhs, CTreePtr rhs) {
        auto atom = std::make_shared<CAtom>();
        atom->op = op;
        atom->lhs = std::move(lhs);
        atom->rhs = std::move(rhs);
        std::set<int> vars;
        tree_vars(atom->lhs, vars);
        tree_vars(atom->rhs, vars);
        atom->vars.assign(vars.begin(), vars.end());
        // precompile the linear face for the ordering layer
        auto a = linearize(atom->lhs);
        auto b = linearize(atom->rhs);
        if (a && b) {
            std::map<int, i64> form = std::move(a->first);
            bool ok = true;
            for (auto& [v, c] : b->first) {
                auto r = checked_sub(form[v], c);
                if (!r) {
                    ok = false;
                    break;
                }
                form[v] = *r;
            }
            auto rc = ok ? checked_sub(a->second, b->second) : std::nullopt;
            if (ok && rc) {
                i64 rhs_c;
                if (!__builtin_sub_overflow(i64{0}, *rc, &rhs_c)) {
                    LinAtom lin;
                    for (auto& [v, c] : form)
                        if (c != 0) lin.terms.push_back({v, c});
                    switch (op) {
                        case CmpOp::Eq: lin.lo = lin.hi = rhs_c; break;
                        case CmpOp::Ne: lin.ne.push_back(rhs_c); break;
                        case CmpOp::Le: lin.hi = rhs_c; break;
                        case CmpOp::Lt: lin.hi = sat_sub(rhs_c, 1); break;
                        case CmpOp::Ge: lin.lo = rhs_c; break;
                        case CmpOp::Gt: lin.lo = sat_add(rhs_c, 1); break;
                    }
                    atom->lin = std::move(lin);
                }
            }
        }
        CItem item;
        item.kind = CItem::Kind::Atom;
        item.atom = std::move(atom);
        g.items.push_back(std::move(item));
    }

    void compile_con(const SConPtr& c, CGroup& g, std::set<std::string>& group_elems) {
        switch (c->kind) {
            case SCon::Kind::True: return;
            case SCon::Kind::False: throw CompileInfeasible{};
            case SCon::Kind::And:
                compile_con(c->a, g, group_elems);
                compile_con(c->b, g, group_elems);
                return;
            case SCon::Kind::Cmp: {
                CTreePtr lhs = compile_expr(c->e1, g, group_elems);
                CTreePtr rhs = compile_expr(c->e2, g, group_elems);
                push_atom(g, c->op, std::move(lhs), std::move(rhs));
                return;
            }
            case SCon::Kind::AllDiff: {
                auto ad = std::make_shared<CAllDiff>();
                ad->vars = materialize(c->array, c->length);
                CItem item;
                item.kind = CItem::Kind::AllDiff;
                item.alldiff = std::move(ad);
                g.items.push_back(std::move(item));
                return;
            }
            case SCon::Kind::Or: {
                std::vector<SConPtr> disjuncts;
                collect_disjuncts(c, disjuncts);
                auto node = std::make_shared<COr>();
                node->id = static_cast<int>(ors_total_++);
                node->split_eligible = split_eligible_;
                for (const auto& d : disjuncts) {
                    CGroup grp;
                    std::set<std::string> elems;
                    try {
                        compile_con(d, grp, elems);
                        node->groups.push_back(std::move(grp));
                    } catch (const CompileInfeasible&) {
                        // statically impossible disjunct: dropped
                    }
                }
                if (node->groups.empty()) throw CompileInfeasible{};
                ors.push_back(node);
                CItem item;
                item.kind = CItem::Kind::Or;
                item.or_node = std::move(node);
                g.items.push_back(std::move(item));
                return;
            }
            default:
                // nnf() leaves no Not/Implies
                throw VerifyError("unexpected constraint form after normalization");
        }
    }

    static void collect_disjuncts(const SConPtr& c, std::vector<SConPtr>& out) {
        if (c->kind == SCon::Kind::Or) {
            collect_disjuncts(c->a, out);
            collect_disjuncts(c->b, out);
        } else {
            out.push_back(c);
        }
    }

    int bits_;
    const std::map<std::string, i64>& lengths_;
    int next_var_ = 0;
    size_t ors_total_ = 0;
    bool split_eligible_ = false;
    std::map<VarRef, int> scalar_ids_;
    std::map<std::pair<VarRef, i64>, int> cell_ids_;
    std::map<VarRef, std::vector<int>> array_cells_;
    std::map<std::string, std::pair<int, int>> read_aux_;  // read text -> (val, idx)
    std::map<std::string, CTreePtr> idx_defs_;             // read text -> idx definition tree
    std::set<std::string> root_elems_;
};

/// The ordering re-check run while the finite-domain solver searches: the
/// linear faces of the root constraints are canonicalized once; per call it
/// (a) tests every active atom against the current hulls, (b) merges
/// identical linear forms (root x activated) and reports bound conflicts, and
/// (c) runs the ordering closure including equalities degenerated from
/// element constraints with a fixed index. No fixpoint, no projection:
/// everything is a single pass so it can be probed from inside propagation.
class OrderChecker {
public:
    void build(const FdEngine& e) {
        base_raw_ = e.active_atoms().size();
        base_elems_ = e.active_elements().size();
        for (size_t i = 0; i < base_raw_; ++i) {
            const auto& a = e.active_atoms()[i];
            if (!a->lin) continue;
            LinAtom la = *a->lin;
            cpbpv::detail::canonicalize(la);
            u64 h = form_hash(la);
            base_hash_.emplace(h, static_cast<int>(base_.size()));
            base_.push_back(std::move(la));
        }
        for (const auto& a : base_) emit_edges(a, static_edges_, static_nes_);
    }

    bool ok(const FdEngine& e) {
        // current-hull test over the static part
        for (const auto& a : base_)
            if (!hull_ok(a, e)) return false;

        // activated atoms and degenerated element equalities
        extras_.clear();
        for (size_t i = base_raw_; i < e.active_atoms().size(); ++i) {
            const auto& a = e.active_atoms()[i];
            if (!a->lin) continue;
            LinAtom la = *a->lin;
            cpbpv::detail::canonicalize(la);
            if (!hull_ok(la, e)) return false;
            extras_.push_back(std::move(la));
        }
        for (const auto& el : e.active_elements()) {
            if (!e.dom(el->idx).fixed()) continue;
            i64 j = e.dom(el->idx).value();
            if (j < 0 || j >= static_cast<i64>(el->cells.size())) continue;
            int cell = el->cells[j];
            if (cell == el->val) continue;
            LinAtom eq;  // val - cell = 0
            int lo = std::min(el->val, cell), hi = std::max(el->val, cell);
            eq.terms = {{lo, 1}, {hi, -1}};
            eq.lo = eq.hi = 0;
            extras_.push_back(std::move(eq));
        }

        // identical-form bound conflicts across root and activated atoms
        for (const auto& x : extras_) {
            auto range = base_hash_.equal_range(form_hash(x));
            for (auto it = range.first; it != range.second; ++it) {
                const LinAtom& b = base_[static_cast<size_t>(it->second)];
                if (!same_form(x, b)) continue;
                if (!merged_ok(x, b)) return false;
            }
        }
        for (size_t i = 0; i < extras_.size(); ++i)
            for (size_t j = i + 1; j < extras_.size(); ++j)
                if (same_form(extras_[i], extras_[j]) && !merged_ok(extras_[i], extras_[j]))
                    return false;

        // ordering closure
        edges_.assign(static_edges_.begin(), static_edges_.end());
        nes_.assign(static_nes_.begin(), static_nes_.end());
        for (const auto& x : extras_) emit_edges(x, edges_, nes_);
        return scc_consistent(e.var_count());
    }

private:
    using u64 = std::uint64_t;

    struct Edge {
        int u, v;
        bool strict;
    };

    static u64 form_hash(const LinAtom& a) {
        u64 h = 1469598103934665603ull;
        for (const auto& t : a.terms) {
            h = (h ^ static_cast<u64>(t.var)) * 1099511628211ull;
            h = (h ^ static_cast<u64>(t.coeff)) * 1099511628211ull;
        }
        return h;
    }

    static bool same_form(const LinAtom& a, const LinAtom& b) {
        if (a.terms.size() != b.terms.size()) return false;
        for (size_t i = 0; i < a.terms.size(); ++i)
            if (a.terms[i].var != b.terms[i].var || a.terms[i].coeff != b.terms[i].coeff)
                return false;
        return true;
    }

    static bool merged_ok(const LinAtom& a, const LinAtom& b) {
        i64 lo = std::max(a.lo, b.lo), hi = std::min(a.hi, b.hi);
        if (lo > hi) return false;
        if (lo == hi && (std::binary_search(a.ne.begin(), a.ne.end(), lo) ||
                         std::binary_search(b.ne.begin(), b.ne.end(), lo)))
            return false;
        return true;
    }

    static bool hull_ok(const LinAtom& a, const FdEngine& e) {
        i64 smin = 0, smax = 0;
        for (const auto& t : a.terms) {
            const Domain& d = e.dom(t.var);
            if (d.empty()) return false;
            smin = sat_add(smin, t.coeff > 0 ? sat_mul(t.coeff, d.lo()) : sat_mul(t.coeff, d.hi()));
            smax = sat_add(smax, t.coeff > 0 ? sat_mul(t.coeff, d.hi()) : sat_mul(t.coeff, d.lo()));
        }
        i64 alo = std::max(a.lo, smin), ahi = std::min(a.hi, smax);
        if (alo > ahi) return false;
        if (alo == ahi && std::binary_search(a.ne.begin(), a.ne.end(), alo)) return false;
        return true;
    }

    static void emit_edges(const LinAtom& a, std::vector<Edge>& edges,
                           std::vector<std::pair<int, int>>& nes) {
        if (a.terms.size() != 2 || a.terms[0].coeff != 1 || a.terms[1].coeff != -1) return;
        int x = a.terms[0].var, y = a.terms[1].var;  // form: x - y
        if (a.hi <= 0) edges.push_back({x, y, a.hi <= -1});
        if (a.lo >= 0) edges.push_back({y, x, a.lo >= 1});
        if (std::binary_search(a.ne.begin(), a.ne.end(), i64{0})) nes.emplace_back(x, y);
    }

    bool scc_consistent(int n) {
        // CSR adjacency over reused buffers
        head_.assign(static_cast<size_t>(n) + 1, 0);
        for (const auto& e : edges_) ++head_[static_cast<size_t>(e.u) + 1];
        for (int i = 0; i < n; ++i) head_[static_cast<size_t>(i) + 1] += head_[static_cast<size_t>(i)];
        adj_.resize(edges_.size());
        fill_.assign(head_.begin(), head_.end() - 1);
        for (const auto& e : edges_) adj_[static_cast<size_t>(fill_[static_cast<size_t>(e.u)]++)] = e.v;

        // iterative Tarjan
        comp_.assign(static_cast<size_t>(n), -1);
        index_.assign(static_cast<size_t>(n), -1);
        low_.assign(static_cast<size_t>(n), 0);
        on_stack_.assign(static_cast<size_t>(n), 0);
        scc_stack_.clear();
        frames_.clear();
        int next_index = 0, ncomp = 0;
        for (int root = 0; root < n; ++root) {
            if (index_[static_cast<size_t>(root)] >= 0) continue;
            frames_.push_back({root, head_[static_cast<size_t>(root)]});
            while (!frames_.empty()) {
                auto& f = frames_.back();
                int v = f.v;
                if (f.next == head_[static_cast<size_t>(v)]) {
                    index_[static_cast<size_t>(v)] = low_[static_cast<size_t>(v)] = next_index++;
                    scc_stack_.push_back(v);
                    on_stack_[static_cast<size_t>(v)] = 1;
                }
                bool descended = false;
                while (f.next < head_[static_cast<size_t>(v) + 1]) {
                    int w = adj_[static_cast<size_t>(f.next++)];
                    if (index_[static_cast<size_t>(w)] < 0) {
                        frames_.push_back({w, head_[static_cast<size_t>(w)]});
                        descended = true;
                        break;
                    }
                    if (on_stack_[static_cast<size_t>(w)])
                        low_[static_cast<size_t>(v)] =
                            std::min(low_[static_cast<size_t>(v)], index_[static_cast<size_t>(w)]);
                }
                if (descended) continue;
                if (low_[static_cast<size_t>(v)] == index_[static_cast<size_t>(v)]) {
                    int w;
                    do {
                        w = scc_stack_.back();
                        scc_stack_.pop_back();
                        on_stack_[static_cast<size_t>(w)] = 0;
                        comp_[static_cast<size_t>(w)] = ncomp;
                    } while (w != v);
                    ++ncomp;
                }
                int finished = v;
                frames_.pop_back();
                if (!frames_.empty())
                    low_[static_cast<size_t>(frames_.back().v)] = std::min(
                        low_[static_cast<size_t>(frames_.back().v)], low_[static_cast<size_t>(finished)]);
            }
        }
        for (const auto& e : edges_)
            if (e.strict && comp_[static_cast<size_t>(e.u)] == comp_[static_cast<size_t>(e.v)])
                return false;
        for (const auto& [x, y] : nes_)
            if (comp_[static_cast<size_t>(x)] == comp_[static_cast<size_t>(y)]) return false;
        return true;
    }

    struct Frame {
        int v;
        size_t next;
    };

    size_t base_raw_ = 0, base_elems_ = 0;
    std::vector<LinAtom> base_;
    std::unordered_multimap<u64, int> base_hash_;
    std::vector<Edge> static_edges_;
    std::vector<std::pair<int, int>> static_nes_;
    // per-call scratch
    std::vector<LinAtom> extras_;
    std::vector<Edge> edges_;
    std::vector<std::pair<int, int>> nes_;
    std::vector<size_t> head_;
    std::vector<size_t> fill_;
    std::vector<int> adj_;
    std::vector<int> comp_, index_, low_;
    std::vector<char> on_stack_;
    std::vector<int> scc_stack_;
    std::vector<Frame> frames_;
};

/// Depth-first search with propagation, ordering re-checks, disjunction
/// splitting and smallest-domain-first labeling.
class FdSearch {
public:
    FdSearch(const Compiler& prob, const SolverConfig& cfg, SolverStats& stats,
             std::span<const SConPtr> originals)
        : prob_(prob), cfg_(cfg), stats_(stats), originals_(originals), engine_(stats.search) {}

    std::optional<Model> run() {
        if (prob_.infeasible) return std::nullopt;
        for (int i = 0; i < prob_.var_count(); ++i) engine_.new_var(prob_.kbit());
        engine_.register_or_nodes(static_cast<int>(prob_.ors.size()));
        for (const auto& it : prob_.root.items) activate_item(it, engine_);
        checker_.build(engine_);
        engine_.set_probe([this]() { return order_ok(); });
        if (!engine_.propagate() || !order_ok()) return std::nullopt;
        if (!dfs()) return std::nullopt;
        return found_;
    }

private:
    bool order_ok() {
        bool ok = checker_.ok(engine_);
        if (!ok) ++stats_.search.order_rejects;
        return ok;
    }

    const COr* pick_open_or() const {
        for (const auto& n : engine_.active_ors())
            if (n->split_eligible && engine_.or_state(n->id) == FdEngine::kOpen) return n.get();
        return nullptr;
    }

    /// Smallest domain first. Among the small-domain variables, ones close to
    /// the most recently split disjunct are preferred (BFS distance over the
    /// active constraint graph, with element constraints connecting the index
    /// only to its still-possible cells), so the refutation of a disjunct is
    /// not delayed by unrelated choices.
    int pick_var() const {
        int best = -1;
        i64 best_size = 0;
        int best_dist = 0;
        bool best_large = false;
        constexpr i64 kSmall = 64;
        for (int v : engine_.relevant_vars()) {
            if (engine_.dom(v).fixed()) continue;
            i64 s = engine_.dom(v).size();
            int d = v < static_cast<int>(dist_.size()) ? dist_[static_cast<size_t>(v)] : kFar;
            bool large = s > kSmall;
            bool take;
            if (best < 0) {
                take = true;
            } else if (large != best_large) {
                take = !large;
            } else if (large) {
                take = s < best_size || (s == best_size && d < best_dist) ||
                       (s == best_size && d == best_dist && v < best);
            } else {
                take = d < best_dist || (d == best_dist && s < best_size) ||
                       (d == best_dist && s == best_size && v < best);
            }
            if (take) {
                best = v;
                best_size = s;
                best_dist = d;
                best_large = large;
            }
        }
        return best;
    }

    static constexpr int kFar = 1 << 29;

    void seed_vars_of_group(const CGroup& g, std::vector<int>& out) const {
        std::set<int> w;
        for (const auto& it : g.items) item_watch_vars(it, w);
        out.assign(w.begin(), w.end());
    }

    /// BFS over the active constraint graph from the activated disjunct.
    void compute_distances(const std::vector<int>& seeds) {
        size_t n = static_cast<size_t>(engine_.var_count());
        dist_.assign(n, kFar);

        // bipartite adjacency: variables <-> active items
        struct ItemVars {
            std::vector<int> vars;
            bool visited = false;
        };
        std::vector<ItemVars> items;
        auto add_item = [&](std::vector<int> vars) { items.push_back({std::move(vars), false}); };
        for (const auto& a : engine_.active_atoms()) add_item(a->vars);
        for (const auto& el : engine_.active_elements()) {
            std::vector<int> vars{el->idx, el->val};
            const Domain& d = engine_.dom(el->idx);
            std::optional<i64> j = d.next(d.lo());
            while (j) {
                if (*j >= 0 && *j < static_cast<i64>(el->cells.size()))
                    vars.push_back(el->cells[static_cast<size_t>(*j)]);
                j = d.next(*j + 1);
            }
            add_item(std::move(vars));
        }
        for (const auto& n_or : engine_.active_ors()) {
            if (engine_.or_state(n_or->id) != FdEngine::kOpen) continue;
            std::set<int> w;
            for (const auto& g : n_or->groups)
                for (const auto& it : g.items) item_watch_vars(it, w);
            add_item({w.begin(), w.end()});
        }
        std::vector<std::vector<int>> var_items(n);
        for (size_t i = 0; i < items.size(); ++i)
            for (int v : items[i].vars) var_items[static_cast<size_t>(v)].push_back(static_cast<int>(i));

        std::deque<int> bfs;
        for (int v : seeds) {
            dist_[static_cast<size_t>(v)] = 0;
            bfs.push_back(v);
        }
        while (!bfs.empty()) {
            int v = bfs.front();
            bfs.pop_front();
            int dv = dist_[static_cast<size_t>(v)];
            for (int it : var_items[static_cast<size_t>(v)]) {
                if (items[static_cast<size_t>(it)].visited) continue;
                items[static_cast<size_t>(it)].visited = true;
                for (int w : items[static_cast<size_t>(it)].vars) {
                    if (dist_[static_cast<size_t>(w)] <= dv + 1) continue;
                    dist_[static_cast<size_t>(w)] = dv + 1;
                    bfs.push_back(w);
                }
            }
        }
    }

    void count_decision() {
        ++stats_.search.decisions;
        if (stats_.search.decisions > cfg_.node_budget)
            throw ResourceLimitError("solver node budget exceeded (" +
                                     std::to_string(cfg_.node_budget) + " nodes)");
    }

    bool dfs() {
        if (const COr* node = pick_open_or()) {
            std::vector<int> saved_dist = dist_;
            std::vector<int> seeds;
            for (size_t g = 0; g < node->groups.size(); ++g) {
                auto st = group_status(node->groups[g], engine_);
                if (st && !*st) continue;  // refuted disjunct
                count_decision();
                engine_.push_level();
                engine_.set_or_state(node->id, static_cast<int>(g));
                activate_group(node->groups[g], engine_);
                seed_vars_of_group(node->groups[g], seeds);
                compute_distances(seeds);
                if (engine_.propagate() && order_ok() && dfs()) return true;
                engine_.backtrack();
            }
            dist_ = std::move(saved_dist);
            return false;
        }
        int v = pick_var();
        if (v < 0) return leaf();
        std::optional<i64> x = engine_.dom(v).next(engine_.dom(v).lo());
        while (x) {
            count_decision();
            engine_.push_level();
            bool ok = engine_.assign(v, *x) && engine_.propagate() && order_ok();
            if (ok && dfs()) return true;
            engine_.backtrack();
            x = engine_.dom(v).next(*x + 1);
        }
        return false;
    }

    bool leaf() {
        Model m = prob_.assemble_model(engine_);
        if (!satisfies(originals_, m))
            throw std::logic_error("solver produced an assignment that fails re-evaluation");
        found_ = std::move(m);
        return true;
    }

    const Compiler& prob_;
    const SolverConfig& cfg_;
    SolverStats& stats_;
    std::span<const SConPtr> originals_;
    FdEngine engine_;
    OrderChecker checker_;
    std::vector<int> dist_;
    std::optional<Model> found_;
};

}  // namespace detail

/// The inexpensive layers of the sequence: Unsat is definitive, Unknown means
/// "consistent as far as the abstraction can tell". Never answers Sat.
inline Verdict check_cheap(std::span<const SConPtr> store, const SolverConfig& cfg,
                           SolverStats& stats) {
    cfg.validate();
    ++stats.cheap_calls;
    for (size_t i = 0; i + 1 < cfg.sequence.size(); ++i) {
        if (cfg.sequence[i] != SolverConfig::Layer::IntervalOrder) continue;
        if (check_cheap_store(store, cfg.bits) == CheapVerdict::Unsat) {
            ++stats.cheap_unsat;
            return {VerdictKind::Unsat, {}};
        }
    }
    return {VerdictKind::Unknown, {}};
}

/// Decision procedure over the k-bit bounded domains: Sat (with a model that
/// re-evaluates true on every constraint) or Unsat. Cheaper layers run first
/// and are re-invoked after every search decision.
inline Verdict check_complete(std::span<const SConPtr> store, std::span<const SConPtr> extra,
                              const SolverConfig& cfg, SolverStats& stats) {
    cfg.validate();
    std::vector<SConPtr> all(store.begin(), store.end());
    all.insert(all.end(), extra.begin(), extra.end());
    if (check_cheap(all, cfg, stats).unsat()) return {VerdictKind::Unsat, {}};
    ++stats.complete_calls;
    detail::Compiler compiler(cfg.bits, cfg.array_lengths);
    for (const auto& c : store) compiler.add(c, false);
    for (const auto& c : extra) compiler.add(c, true);
    detail::FdSearch search(compiler, cfg, stats, all);
    auto model = search.run();
    if (!model) return {VerdictKind::Unsat, {}};
    return {VerdictKind::Sat, std::move(*model)};
}

inline Verdict check_complete(std::span<const SConPtr> store, const SolverConfig& cfg,
                              SolverStats& stats) {
    return check_complete(store, {}, cfg, stats);
}

/// Model of store AND NOT claim, if one exists.
inline std::optional<Model> refute(std::span<const SConPtr> store, const SConPtr& claim,
                                   const SolverConfig& cfg, SolverStats& stats) {
    SConPtr neg = negate(claim);
    std::vector<SConPtr> extra{neg};
    Verdict v = check_complete(store, extra, cfg, stats);
    if (v.sat()) return std::move(v.model);
    return std::nullopt;
}

/// store entails claim iff store AND NOT claim is unsatisfiable.
inline bool entails(std::span<const SConPtr> store, const SConPtr& claim, const SolverConfig& cfg,
                    SolverStats& stats) {
    return !refute(store, claim, cfg, stats).has_value();
}

}  // namespace cpbpv
