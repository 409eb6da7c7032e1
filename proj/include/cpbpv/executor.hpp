#pragma once

#include <atomic>
#include <deque>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "cpbpv/ast.hpp"
#include "cpbpv/renaming.hpp"
#include "cpbpv/solver.hpp"
#include "cpbpv/store.hpp"

namespace cpbpv {

// Symbolic execution of the structured-operational-semantics rules as a
// nondeterministic depth-first exploration over configurations
// (instruction list, version map, constraint store). Terminal stores are
// checked against the negated postcondition; assert/enforce/contract/overflow
// events produce witness models. All paths are explored; the reported
// violation is the first one in trace order.

struct DecisionTag {
    bool taken_true;
    int line;  // relative to the function header (header = line 1)
};

inline std::string to_string(const DecisionTag& t) {
    return (t.taken_true ? "T" : "F") + std::to_string(t.line);
}

inline std::string to_string(const std::vector<DecisionTag>& trace) {
    std::string out;
    for (size_t i = 0; i < trace.size(); ++i) {
        if (i) out += ",";
        out += to_string(trace[i]);
    }
    return out;
}

struct ExecOptions {
    SolverConfig solver;
    bool check_overflow = false;
    i64 max_depth = 10'000;  // nondeterministic choices per path
    int jobs = 1;
    size_t prune_log_limit = 20'000;
    size_t path_log_limit = 20'000;
};

struct Configuration {
    enum class Status { Running, Top, Bottom };
    Status status = Status::Running;
    std::vector<const Instr*> todo;  // back() is the next instruction
    VersionMap sigma;
    ConstBindings consts;
    std::set<std::string> written;  // identifiers already carrying a value
    ConstraintStore store;
    std::vector<DecisionTag> trace;
    Model bottom_witness;           // model of store AND NOT b for Bottom
    int bottom_line = 0;
};

enum class ExecVerdict {
    PartiallyCorrect,
    PostconditionViolation,
    AssertionViolation,
    ContractViolation,
    OverflowViolation,
};

inline const char* to_string(ExecVerdict v) {
    switch (v) {
        case ExecVerdict::PartiallyCorrect: return "partially_correct";
        case ExecVerdict::PostconditionViolation: return "postcondition_violation";
        case ExecVerdict::AssertionViolation: return "assertion_violation";
        case ExecVerdict::ContractViolation: return "contract_violation";
        case ExecVerdict::OverflowViolation: return "overflow_violation";
    }
    return "?";
}

struct Violation {
    ExecVerdict kind;
    Model witness;  // full model; input projection happens in reporting
    std::vector<DecisionTag> trace;
    std::string detail;
};

struct PathRecord {
    std::string trace;
    bool feasible;
    bool violating;
};

struct VerificationReport {
    ExecVerdict verdict = ExecVerdict::PartiallyCorrect;
    std::optional<Violation> violation;  // first in trace order
    i64 complete_paths = 0;              // feasible paths that ran to completion
    i64 infeasible_complete_paths = 0;   // admitted mid-path, refuted at the end
    i64 pruned_branches = 0;
    i64 enforce_prunes = 0;
    i64 violations_found = 0;
    std::vector<std::string> pruned_log;
    i64 pruned_log_dropped = 0;
    std::vector<PathRecord> paths;
    i64 paths_dropped = 0;
    SolverStats solver;
    double wall_ms = 0;
};

namespace detail {

/// Event accumulator for one exploration unit; merged in frontier order.
struct Bundle {
    std::optional<Violation> first_violation;
    i64 complete_paths = 0;
    i64 infeasible_complete_paths = 0;
    i64 pruned_branches = 0;
    i64 enforce_prunes = 0;
    i64 violations_found = 0;
    i64 paths_total = 0;
    std::vector<std::string> pruned_log;
    std::vector<PathRecord> paths;
    SolverStats solver;

    void merge(Bundle&& o) {
        if (!first_violation && o.first_violation) first_violation = std::move(o.first_violation);
        complete_paths += o.complete_paths;
        infeasible_complete_paths += o.infeasible_complete_paths;
        pruned_branches += o.pruned_branches;
        enforce_prunes += o.enforce_prunes;
        violations_found += o.violations_found;
        paths_total += o.paths_total;
        pruned_log.insert(pruned_log.end(), std::make_move_iterator(o.pruned_log.begin()),
                          std::make_move_iterator(o.pruned_log.end()));
        paths.insert(paths.end(), std::make_move_iterator(o.paths.begin()),
                     std::make_move_iterator(o.paths.end()));
        solver += o.solver;
    }

    void note_violation(Violation v) {
        ++violations_found;
        if (!first_violation) first_violation = std::move(v);
    }
};

}  // namespace detail

class Executor {
public:
    Executor(const ProgramAst& ast, std::vector<Contract> extra_contracts, ExecOptions opts)
        : ast_(ast), opts_(std::move(opts)) {
        if (!symbolic_bounds(ast_).empty())
            throw VerifyError("program still has symbolic bounds; bind them first");
        lengths_ = array_lengths(ast_.params);
        opts_.solver.array_lengths = lengths_;
        opts_.solver.validate();

        for (const auto& c : ast_.contracts) contracts_[c.name] = c;
        for (auto& c : extra_contracts) contracts_.emplace(c.name, std::move(c));

        std::set<std::string> universe;
        for (const auto& p : ast_.params) {
            universe.insert(p.name);
            if (!p.is_array) scalars_.push_back(p.name);
        }
        std::set<std::string> locals;
        collect_locals(ast_.body, locals);
        for (const auto& l : locals) {
            universe.insert(l);
            scalars_.push_back(l);
        }
        universe.insert("result");
        scalars_.push_back("result");
        sigma0_ = VersionMap(universe);
    }

    const std::map<std::string, i64>& lengths() const { return lengths_; }

    Configuration initial() const {
        Configuration cfg;
        cfg.sigma = sigma0_;
        for (const auto& p : ast_.params)
            if (!p.is_array) cfg.written.insert(p.name);
        for (const auto& [a, n] : lengths_) cfg.written.insert(a);
        for (auto it = ast_.body.rbegin(); it != ast_.body.rend(); ++it)
            cfg.todo.push_back(it->get());
        detail::Bundle scratch;
        post_conjuncts(cfg, expand_spec(cfg, ast_.precondition), scratch);
        return cfg;
    }

    /// One rule application: every successor whose side condition holds.
    std::vector<Configuration> step(const Configuration& cfg) {
        detail::Bundle scratch;
        return step_core(cfg, scratch);
    }

    VerificationReport explore() {
        detail::Bundle total;
        std::vector<Unit> frontier = build_frontier(total);

        if (frontier.empty()) {
            // nothing pending: everything was resolved while expanding
        } else if (opts_.jobs <= 1 || frontier.size() == 1) {
            for (auto& u : frontier)
                if (u.pending) run_unit(*u.pending, u.bundle);
        } else {
            std::atomic<size_t> next{0};
            std::vector<std::exception_ptr> errors(frontier.size());
            auto worker = [&]() {
                while (true) {
                    size_t i = next.fetch_add(1);
                    if (i >= frontier.size()) return;
                    if (!frontier[i].pending) continue;
                    try {
                        run_unit(*frontier[i].pending, frontier[i].bundle);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            };
            int n = std::min<int>(opts_.jobs, static_cast<int>(frontier.size()));
            std::vector<std::thread> pool;
            for (int i = 0; i < n; ++i) pool.emplace_back(worker);
            for (auto& t : pool) t.join();
            for (auto& e : errors)
                if (e) std::rethrow_exception(e);
        }

        for (auto& u : frontier) total.merge(std::move(u.bundle));
        return finalize(std::move(total));
    }

private:
    struct Unit {
        std::optional<Configuration> pending;
        detail::Bundle bundle;
    };

    static void collect_locals(const std::vector<InstrPtr>& body, std::set<std::string>& universe) {
        for (const auto& s : body) collect_locals_instr(s, universe);
    }

    static void collect_locals_instr(const InstrPtr& s, std::set<std::string>& universe);

    // ---- renaming helpers ----

    RenameEnv env_of(const Configuration& cfg, bool fold = true) const {
        RenameEnv env = RenameEnv::from_sigma(cfg.sigma, scalars_, lengths_, &cfg.consts, fold);
        env.hull = [this, &cfg](const SExprPtr& e) {
            CheapProblem p(opts_.solver.bits);
            p.add_all(cfg.store.view());
            auto iv = p.intervals();
            Interval h = p.hull(e, iv);
            return std::make_pair(h.lo, h.hi);
        };
        return env;
    }

    SConPtr expand_spec(const Configuration& cfg, const BoolPtr& spec) const {
        return expand_quantifiers(env_of(cfg), spec);
    }

    SExprPtr rename(const Configuration& cfg, const ExprPtr& e) const {
        return detail_rename(env_of(cfg), e);
    }

    static SExprPtr detail_rename(const RenameEnv& env, const ExprPtr& e) {
        return cpbpv::detail::rename_expr_env(env, e);
    }

    SConPtr rename_cond(const Configuration& cfg, const BoolPtr& b) const {
        return cpbpv::detail::rename_bool_env(env_of(cfg), b, false);
    }

    /// Posts a constraint conjunct-by-conjunct, learning fixed values.
    static void post_conjuncts(Configuration& cfg, const SConPtr& con, detail::Bundle&) {
        std::vector<SConPtr> parts;
        flatten_conjuncts(con, parts);
        for (auto& p : parts) {
            cfg.store.post(p);
            learn(cfg.consts, p);
        }
    }

    static void learn(ConstBindings& consts, const SConPtr& c) {
        if (c->kind != SCon::Kind::Cmp || c->op != CmpOp::Eq) return;
        const SExprPtr& a = c->e1;
        const SExprPtr& b = c->e2;
        const SExprPtr& lhs = b->is_const() ? a : b;
        const SExprPtr& rhs = b->is_const() ? b : a;
        if (!rhs->is_const() || lhs->is_const()) return;
        if (lhs->kind == SExpr::Kind::Var) {
            consts.scalars[lhs->var] = rhs->value;
        } else if (lhs->kind == SExpr::Kind::Cell && lhs->a->is_const()) {
            consts.cells[{lhs->var, lhs->a->value}] = rhs->value;
        }
    }

    // ---- rule application ----

    std::vector<Configuration> step_core(const Configuration& cfg, detail::Bundle& sink) {
        if (cfg.status != Configuration::Status::Running)
            throw VerifyError("step on a terminal configuration");
        if (cfg.todo.empty()) {
            Configuration top = cfg;
            top.status = Configuration::Status::Top;
            return {std::move(top)};
        }
        Configuration base = cfg;
        const Instr* ins = base.todo.back();
        base.todo.pop_back();
        switch (ins->kind) {
            case Instr::Kind::AssignScalar: return assign_scalar(std::move(base), *ins, sink);
            case Instr::Kind::AssignArray: return assign_array(std::move(base), *ins, sink);
            case Instr::Kind::If:
            case Instr::Kind::While: return branch(std::move(base), *ins, sink);
            case Instr::Kind::Assert: return do_assert(std::move(base), *ins, sink);
            case Instr::Kind::Enforce: return do_enforce(std::move(base), *ins, sink);
            case Instr::Kind::Return: return do_return(std::move(base), *ins, sink);
            case Instr::Kind::Block: {
                for (auto it = ins->body.rbegin(); it != ins->body.rend(); ++it)
                    base.todo.push_back(it->get());
                std::vector<Configuration> out;
                out.push_back(std::move(base));
                return out;
            }
            case Instr::Kind::Call: return apply_contract(std::move(base), *ins, sink);
        }
        return {};
    }

    int line_of(const Instr& ins) const { return display_line(ast_, ins.pos); }

    /// Assignments constrain version 0 on the first write of a local (and of
    /// a call-result target); re-assignments create a fresh version.
    VarRef write_target(Configuration& cfg, const std::string& name) {
        if (cfg.written.count(name)) {
            cfg.sigma = cfg.sigma.bump(name);
        } else {
            cfg.written.insert(name);
        }
        return cfg.sigma.ref(name);
    }

    std::vector<Configuration> assign_scalar(Configuration cfg, const Instr& ins,
                                             detail::Bundle& sink) {
        SExprPtr rhs = rename(cfg, ins.value);
        if (auto v = overflow_violation(cfg, rhs, ins, sink)) {
            sink.note_violation(std::move(*v));
            return {};
        }
        VarRef lhs = write_target(cfg, ins.target);
        post_conjuncts(cfg, sc_cmp(CmpOp::Eq, sc_var(lhs), rhs), sink);
        std::vector<Configuration> out;
        out.push_back(std::move(cfg));
        return out;
    }

    std::vector<Configuration> assign_array(Configuration cfg, const Instr& ins,
                                            detail::Bundle& sink) {
        SExprPtr idx = rename(cfg, ins.index);
        SExprPtr rhs = rename(cfg, ins.value);
        if (auto v = overflow_violation(cfg, rhs, ins, sink)) {
            sink.note_violation(std::move(*v));
            return {};
        }
        VarRef old_ref = cfg.sigma.ref(ins.target);
        cfg.sigma = cfg.sigma.bump(ins.target);
        VarRef new_ref = cfg.sigma.ref(ins.target);
        i64 len = lengths_.at(ins.target);

        auto old_cell = [&](i64 i) -> SExprPtr {
            if (auto v = cfg.consts.cell(old_ref, i)) return sc_const(*v);
            return sc_cell(old_ref, sc_const(i));
        };

        if (idx->is_const()) {
            i64 c = idx->value;
            if (c < 0 || c >= len) {
                post_conjuncts(cfg, sc_bool(false), sink);  // write outside the array
            } else {
                post_conjuncts(cfg, sc_cmp(CmpOp::Eq, sc_cell(new_ref, idx), rhs), sink);
                for (i64 i = 0; i < len; ++i) {
                    if (i == c) continue;
                    post_conjuncts(
                        cfg, sc_cmp(CmpOp::Eq, sc_cell(new_ref, sc_const(i)), old_cell(i)), sink);
                }
            }
        } else {
            post_conjuncts(cfg, sc_cmp(CmpOp::Eq, sc_cell(new_ref, idx), rhs), sink);
            for (i64 i = 0; i < len; ++i) {
                SConPtr guard = sc_cmp(CmpOp::Ne, idx, sc_const(i));
                SConPtr frame = sc_cmp(CmpOp::Eq, sc_cell(new_ref, sc_const(i)), old_cell(i));
                post_conjuncts(cfg, sc_bin(SCon::Kind::Implies, guard, frame), sink);
            }
        }
        std::vector<Configuration> out;
        out.push_back(std::move(cfg));
        return out;
    }

    std::vector<Configuration> branch(Configuration cfg, const Instr& ins, detail::Bundle& sink) {
        if (static_cast<i64>(cfg.trace.size()) >= opts_.max_depth)
            throw ResourceLimitError("maximum path depth (" + std::to_string(opts_.max_depth) +
                                     ") exceeded on path " + to_string(cfg.trace));
        SConPtr cb = rename_cond(cfg, ins.cond);
        int line = line_of(ins);
        std::vector<Configuration> out;
        auto attempt = [&](bool taken, const SConPtr& cand) {
            DecisionTag tag{taken, line};
            if (feasible(cfg, cand, sink)) {
                Configuration succ = cfg;
                succ.trace.push_back(tag);
                post_conjuncts(succ, cand, sink);
                if (ins.kind == Instr::Kind::While) {
                    if (taken) {
                        succ.todo.push_back(&ins);
                        succ.todo.push_back(ins.then_branch.get());
                    }
                } else if (taken) {
                    succ.todo.push_back(ins.then_branch.get());
                } else if (ins.else_branch) {
                    succ.todo.push_back(ins.else_branch.get());
                }
                out.push_back(std::move(succ));
            } else {
                note_prune(sink, cfg.trace, tag);
            }
        };
        attempt(true, cb);
        attempt(false, negate(cb));
        return out;
    }

    bool feasible(const Configuration& cfg, const SConPtr& cand, detail::Bundle& sink) {
        if (cand->kind == SCon::Kind::True) return true;
        if (cand->kind == SCon::Kind::False) return false;
        std::vector<SConPtr> all(cfg.store.view().begin(), cfg.store.view().end());
        all.push_back(cand);
        return !check_cheap(all, opts_.solver, sink.solver).unsat();
    }

    void note_prune(detail::Bundle& sink, const std::vector<DecisionTag>& trace,
                    DecisionTag tag) {
        ++sink.pruned_branches;
        if (sink.pruned_log.size() < opts_.prune_log_limit) {
            std::string s = to_string(trace);
            if (!s.empty()) s += ",";
            s += to_string(tag);
            sink.pruned_log.push_back(std::move(s));
        }
    }

    std::vector<Configuration> do_assert(Configuration cfg, const Instr& ins,
                                         detail::Bundle& sink) {
        SConPtr cb = rename_cond(cfg, ins.cond);
        if (cb->kind == SCon::Kind::True) {
            std::vector<Configuration> out;
            out.push_back(std::move(cfg));
            return out;
        }
        auto witness = refute(cfg.store.view(), cb, opts_.solver, sink.solver);
        if (!witness) {  // entailed: proceed, store unchanged
            std::vector<Configuration> out;
            out.push_back(std::move(cfg));
            return out;
        }
        cfg.status = Configuration::Status::Bottom;
        cfg.bottom_witness = std::move(*witness);
        cfg.bottom_line = line_of(ins);
        std::vector<Configuration> out;
        out.push_back(std::move(cfg));
        return out;
    }

    std::vector<Configuration> do_enforce(Configuration cfg, const Instr& ins,
                                          detail::Bundle& sink) {
        SConPtr cb = rename_cond(cfg, ins.cond);
        std::vector<SConPtr> all(cfg.store.view().begin(), cfg.store.view().end());
        all.push_back(cb);
        Verdict v = check_complete(all, opts_.solver, sink.solver);
        if (!v.sat()) {
            ++sink.enforce_prunes;
            return {};
        }
        post_conjuncts(cfg, cb, sink);
        std::vector<Configuration> out;
        out.push_back(std::move(cfg));
        return out;
    }

    std::vector<Configuration> do_return(Configuration cfg, const Instr& ins,
                                         detail::Bundle& sink) {
        SExprPtr rhs = rename(cfg, ins.value);
        if (auto v = overflow_violation(cfg, rhs, ins, sink)) {
            sink.note_violation(std::move(*v));
            return {};
        }
        post_conjuncts(cfg, sc_cmp(CmpOp::Eq, sc_var(cfg.sigma.ref("result")), rhs), sink);
        cfg.todo.clear();
        cfg.status = Configuration::Status::Top;
        std::vector<Configuration> out;
        out.push_back(std::move(cfg));
        return out;
    }

    std::vector<Configuration> apply_contract(Configuration cfg, const Instr& ins,
                                              detail::Bundle& sink) {
        auto found = contracts_.find(ins.callee);
        if (found == contracts_.end())
            throw VerifyError("no contract for callee '" + ins.callee + "'");
        const Contract& ctr = found->second;
        if (ins.args.size() != ctr.params.size())
            throw VerifyError("call to '" + ins.callee + "' passes " +
                              std::to_string(ins.args.size()) + " arguments, contract declares " +
                              std::to_string(ctr.params.size()));

        // callee-side environment: formals bound to renamed actuals
        RenameEnv caller_env = env_of(cfg);
        RenameEnv callee_env;
        callee_env.consts = &cfg.consts;
        callee_env.hull = caller_env.hull;
        for (size_t i = 0; i < ctr.params.size(); ++i) {
            const Param& formal = ctr.params[i];
            const ExprPtr& actual = ins.args[i];
            if (formal.is_array) {
                if (actual->kind != Expr::Kind::Var || !lengths_.count(actual->name))
                    throw VerifyError("argument " + std::to_string(i + 1) + " of '" + ins.callee +
                                      "' must be an array parameter name");
                if (formal.length->kind != Expr::Kind::IntLit)
                    throw VerifyError("contract of '" + ins.callee +
                                      "' still has a symbolic array bound");
                i64 want = formal.length->value;
                if (lengths_.at(actual->name) != want)
                    throw VerifyError("array argument '" + actual->name + "' has length " +
                                      std::to_string(lengths_.at(actual->name)) +
                                      ", contract of '" + ins.callee + "' needs " +
                                      std::to_string(want));
                callee_env.arrays[formal.name] = cfg.sigma.ref(actual->name);
                callee_env.array_lengths[formal.name] = want;
            } else {
                callee_env.scalars[formal.name] = cpbpv::detail::rename_expr_env(caller_env, actual);
            }
        }

        // 1. the precondition must be entailed
        SConPtr pre = expand_quantifiers(callee_env, ctr.precondition);
        if (pre->kind != SCon::Kind::True) {
            auto witness = refute(cfg.store.view(), pre, opts_.solver, sink.solver);
            if (witness) {
                Violation v{ExecVerdict::ContractViolation, std::move(*witness), cfg.trace,
                            "precondition of '" + ins.callee + "' not entailed at line " +
                                std::to_string(line_of(ins))};
                sink.note_violation(std::move(v));
                return {};
            }
        }

        // 2. havoc the result target and any arrays the contract may modify
        for (const auto& m : ctr.modifies) {
            auto arr = callee_env.arrays.find(m);
            if (arr == callee_env.arrays.end())
                throw VerifyError("contract of '" + ins.callee + "' modifies unknown array '" + m +
                                  "'");
            cfg.sigma = cfg.sigma.bump(arr->second.name);
            callee_env.arrays[m] = cfg.sigma.ref(arr->second.name);
        }
        VarRef target = write_target(cfg, ins.target);
        callee_env.scalars["result"] = sc_var(target);

        // 3. assume the postcondition over the fresh versions
        SConPtr post = expand_quantifiers(callee_env, ctr.postcondition);
        post_conjuncts(cfg, post, sink);
        std::vector<Configuration> out;
        out.push_back(std::move(cfg));
        return out;
    }

    // ---- overflow checking (enabled by flag) ----
    // Every subexpression of an assigned right-hand side, in evaluation
    // order, must provably fit the k-bit representation.

    std::optional<Violation> overflow_violation(const Configuration& cfg, const SExprPtr& rhs,
                                                const Instr& ins, detail::Bundle& sink) {
        if (!opts_.check_overflow) return std::nullopt;
        std::vector<SExprPtr> order;
        subexprs_in_eval_order(rhs, order);
        i64 lo = min_value(opts_.solver.bits), hi = max_value(opts_.solver.bits);
        for (const auto& e : order) {
            SConPtr in_range = sc_and_fold(sc_cmp_fold(CmpOp::Ge, e, sc_const(lo)),
                                           sc_cmp_fold(CmpOp::Le, e, sc_const(hi)));
            if (in_range->kind == SCon::Kind::True) continue;
            auto witness = refute(cfg.store.view(), in_range, opts_.solver, sink.solver);
            if (witness) {
                return Violation{ExecVerdict::OverflowViolation, std::move(*witness), cfg.trace,
                                 "value of '" + to_string(e) + "' at line " +
                                     std::to_string(line_of(ins)) +
                                     " may not fit in " + std::to_string(opts_.solver.bits) +
                                     " bits"};
            }
        }
        return std::nullopt;
    }

    static void subexprs_in_eval_order(const SExprPtr& e, std::vector<SExprPtr>& out) {
        switch (e->kind) {
            case SExpr::Kind::Var: return;  // variables and cells are domain-bounded
            case SExpr::Kind::Cell:
                subexprs_in_eval_order(e->a, out);  // the index is still computed
                return;
            case SExpr::Kind::Const: out.push_back(e); return;
            default:
                subexprs_in_eval_order(e->a, out);
                subexprs_in_eval_order(e->b, out);
                out.push_back(e);
        }
    }

    // ---- terminal handling ----

    void handle_top(const Configuration& cfg, detail::Bundle& sink) {
        std::vector<SConPtr> store(cfg.store.view().begin(), cfg.store.view().end());
        if (check_cheap(store, opts_.solver, sink.solver).unsat()) {
            ++sink.infeasible_complete_paths;
            note_path(sink, cfg, false, false);
            return;
        }
        SConPtr neg_post = negate(expand_spec(cfg, ast_.postcondition));
        if (neg_post->kind != SCon::Kind::False) {
            Verdict v = check_complete(store, std::vector<SConPtr>{neg_post}, opts_.solver,
                                       sink.solver);
            if (v.sat()) {
                ++sink.complete_paths;
                note_path(sink, cfg, true, true);
                sink.note_violation(Violation{ExecVerdict::PostconditionViolation,
                                              std::move(v.model), cfg.trace,
                                              "postcondition can be falsified"});
                return;
            }
        }
        Verdict feas = check_complete(store, opts_.solver, sink.solver);
        if (feas.sat()) {
            ++sink.complete_paths;
            note_path(sink, cfg, true, false);
        } else {
            ++sink.infeasible_complete_paths;
            note_path(sink, cfg, false, false);
        }
    }

    void handle_bottom(const Configuration& cfg, detail::Bundle& sink) {
        sink.note_violation(Violation{ExecVerdict::AssertionViolation, cfg.bottom_witness,
                                      cfg.trace,
                                      "assertion at line " + std::to_string(cfg.bottom_line) +
                                          " can be violated"});
        note_path(sink, cfg, true, true);
    }

    void note_path(detail::Bundle& sink, const Configuration& cfg, bool feasible, bool violating) {
        ++sink.paths_total;
        if (sink.paths.size() < opts_.path_log_limit)
            sink.paths.push_back({to_string(cfg.trace), feasible, violating});
    }

    // ---- exploration ----

    void run_unit(const Configuration& start, detail::Bundle& sink) {
        std::vector<Configuration> stack;
        stack.push_back(start);
        while (!stack.empty()) {
            Configuration cfg = std::move(stack.back());
            stack.pop_back();
            dispatch(std::move(cfg), stack, sink);
        }
    }

    void dispatch(Configuration cfg, std::vector<Configuration>& stack, detail::Bundle& sink) {
        switch (cfg.status) {
            case Configuration::Status::Top: handle_top(cfg, sink); return;
            case Configuration::Status::Bottom: handle_bottom(cfg, sink); return;
            case Configuration::Status::Running: {
                std::vector<Configuration> succs = step_core(cfg, sink);
                for (auto it = succs.rbegin(); it != succs.rend(); ++it)
                    stack.push_back(std::move(*it));
                return;
            }
        }
    }

    /// Expands the leftmost expandable configuration until there are enough
    /// independent subtrees to hand to the workers; keeps left-to-right
    /// (trace) order so merging is deterministic.
    std::vector<Unit> build_frontier(detail::Bundle&) {
        std::deque<Unit> frontier;
        frontier.push_back(Unit{initial(), {}});
        if (opts_.jobs > 1) {
            size_t target = static_cast<size_t>(opts_.jobs) * 8;
            int expansions = 0;
            int max_expansions = opts_.jobs * 64;
            while (frontier.size() < target && expansions < max_expansions) {
                // leftmost pending Running configuration
                size_t i = 0;
                while (i < frontier.size() &&
                       (!frontier[i].pending ||
                        frontier[i].pending->status != Configuration::Status::Running))
                    ++i;
                if (i == frontier.size()) break;
                ++expansions;
                Unit u = std::move(frontier[i]);
                frontier.erase(frontier.begin() + static_cast<long>(i));
                std::vector<Configuration> succs = step_core(*u.pending, u.bundle);
                // the event bundle of the expansion stays at this position
                std::deque<Unit> spliced;
                spliced.push_back(Unit{std::nullopt, std::move(u.bundle)});
                for (auto& s : succs) spliced.push_back(Unit{std::move(s), {}});
                frontier.insert(frontier.begin() + static_cast<long>(i),
                                std::make_move_iterator(spliced.begin()),
                                std::make_move_iterator(spliced.end()));
            }
        }
        // terminal configurations left in the frontier are resolved inline
        std::vector<Unit> out;
        for (auto& u : frontier) {
            if (u.pending && u.pending->status != Configuration::Status::Running) {
                dispatchless_terminal(*u.pending, u.bundle);
                u.pending.reset();
            }
            out.push_back(std::move(u));
        }
        return out;
    }

    void dispatchless_terminal(const Configuration& cfg, detail::Bundle& sink) {
        if (cfg.status == Configuration::Status::Top)
            handle_top(cfg, sink);
        else
            handle_bottom(cfg, sink);
    }

    VerificationReport finalize(detail::Bundle&& total) {
        VerificationReport rep;
        rep.complete_paths = total.complete_paths;
        rep.infeasible_complete_paths = total.infeasible_complete_paths;
        rep.pruned_branches = total.pruned_branches;
        rep.enforce_prunes = total.enforce_prunes;
        rep.violations_found = total.violations_found;
        rep.pruned_log = std::move(total.pruned_log);
        rep.pruned_log_dropped = total.pruned_branches - static_cast<i64>(rep.pruned_log.size());
        rep.paths = std::move(total.paths);
        rep.paths_dropped = total.paths_total - static_cast<i64>(rep.paths.size());
        rep.solver = total.solver;
        if (total.first_violation) {
            rep.verdict = total.first_violation->kind;
            rep.violation = std::move(total.first_violation);
        } else {
            rep.verdict = ExecVerdict::PartiallyCorrect;
        }
        return rep;
    }

    const ProgramAst& ast_;
    ExecOptions opts_;
    std::map<std::string, i64> lengths_;
    std::map<std::string, Contract> contracts_;
    std::vector<std::string> scalars_;
    VersionMap sigma0_;
};

inline void Executor::collect_locals_instr(const InstrPtr& s, std::set<std::string>& universe) {
    if ((s->kind == Instr::Kind::AssignScalar || s->kind == Instr::Kind::Call) && s->is_decl)
        universe.insert(s->target);
    if (s->then_branch) collect_locals_instr(s->then_branch, universe);
    if (s->else_branch) collect_locals_instr(s->else_branch, universe);
    for (const auto& b : s->body) collect_locals_instr(b, universe);
}

/// Full nondeterministic exploration of a concrete program.
inline VerificationReport explore(const ProgramAst& ast, std::vector<Contract> contracts,
                                  const ExecOptions& opts) {
    Executor ex(ast, std::move(contracts), opts);
    return ex.explore();
}

}  // namespace cpbpv
