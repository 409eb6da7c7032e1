#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cpbpv/ast.hpp"
#include "cpbpv/executor.hpp"

namespace cpbpv {

// Deterministic big-step interpreter and exhaustive-enumeration verifier.
// These mirror the bounded constraint semantics exactly: variables live in
// the k-bit range (an assignment leaving it makes the execution fall outside
// the modeled domain), expression arithmetic is exact, division truncates
// toward zero, division by zero and out-of-range indices are undefined, and
// boolean connectives are symmetric three-valued.

struct ConcreteInput {
    std::map<std::string, i64> scalars;
    std::map<std::string, std::vector<i64>> arrays;

    Model as_model() const {  // version-0 projection
        Model m;
        for (const auto& [k, v] : scalars) m.scalars[{k, 0}] = v;
        for (const auto& [k, v] : arrays) m.arrays[{k, 0}] = v;
        return m;
    }
};

struct ExecResult {
    enum class Outcome {
        Returned,
        NoReturn,
        AssertFailed,
        ContractFailed,
        OverflowFailed,
        OutOfDomain,  // execution left the bounded domain: no modeled behavior
        StepLimit,
    };
    Outcome outcome = Outcome::NoReturn;
    i64 value = 0;  // Returned
    std::vector<DecisionTag> trace;
    std::map<std::string, i64> final_scalars;
    std::map<std::string, std::vector<i64>> final_arrays;
    int fail_line = 0;
};

namespace detail {

struct InterpEnv {
    std::map<std::string, i64> scalars;
    std::map<std::string, std::vector<i64>>* arrays;  // shared: reference semantics
    std::map<std::string, i64> bound_consts;          // quantified variables
};

class Interpreter {
public:
    Interpreter(const ProgramAst& main, const std::map<std::string, const ProgramAst*>& bodies,
                const std::map<std::string, Contract>& contracts, int bits, bool check_overflow,
                i64 step_limit)
        : main_(main),
          bodies_(bodies),
          contracts_(contracts),
          bits_(bits),
          check_overflow_(check_overflow),
          step_limit_(step_limit) {}

    ExecResult run(const ConcreteInput& input) {
        ExecResult res;
        arrays_ = input.arrays;
        detail::InterpEnv env{input.scalars, &arrays_, {}};
        steps_ = 0;
        trace_.clear();
        Flow f = run_body(main_, env, /*record_trace=*/true);
        res.trace = std::move(trace_);
        res.final_scalars = env.scalars;
        res.final_arrays = arrays_;
        switch (f.kind) {
            case Flow::Kind::Finished: res.outcome = ExecResult::Outcome::NoReturn; break;
            case Flow::Kind::Returned:
                res.outcome = ExecResult::Outcome::Returned;
                res.value = f.value;
                break;
            case Flow::Kind::AssertFailed:
                res.outcome = ExecResult::Outcome::AssertFailed;
                res.fail_line = f.line;
                break;
            case Flow::Kind::ContractFailed:
                res.outcome = ExecResult::Outcome::ContractFailed;
                res.fail_line = f.line;
                break;
            case Flow::Kind::OverflowFailed:
                res.outcome = ExecResult::Outcome::OverflowFailed;
                res.fail_line = f.line;
                break;
            case Flow::Kind::OutOfDomain: res.outcome = ExecResult::Outcome::OutOfDomain; break;
            case Flow::Kind::StepLimit: res.outcome = ExecResult::Outcome::StepLimit; break;
        }
        return res;
    }

    /// Three-valued evaluation of a specification over a concrete state.
    std::optional<bool> eval_spec(const BoolPtr& b, detail::InterpEnv& env,
                                  const std::optional<i64>& result) {
        switch (b->kind) {
            case BoolExpr::Kind::True: return true;
            case BoolExpr::Kind::False: return false;
            case BoolExpr::Kind::Cmp: {
                auto x = eval_expr(b->e1, env, result);
                auto y = eval_expr(b->e2, env, result);
                if (!x || !y) return std::nullopt;
                return eval_cmp(b->op, *x, *y);
            }
            case BoolExpr::Kind::Not: {
                auto v = eval_spec(b->b1, env, result);
                if (!v) return std::nullopt;
                return !*v;
            }
            case BoolExpr::Kind::And: {
                auto x = eval_spec(b->b1, env, result);
                auto y = eval_spec(b->b2, env, result);
                if (x && !*x) return false;
                if (y && !*y) return false;
                if (x && y) return true;
                return std::nullopt;
            }
            case BoolExpr::Kind::Or: {
                auto x = eval_spec(b->b1, env, result);
                auto y = eval_spec(b->b2, env, result);
                if (x && *x) return true;
                if (y && *y) return true;
                if (x && y) return false;
                return std::nullopt;
            }
            case BoolExpr::Kind::Implies: {
                auto x = eval_spec(b->b1, env, result);
                auto y = eval_spec(b->b2, env, result);
                if (x && !*x) return true;
                if (y && *y) return true;
                if (x && y) return *y;
                return std::nullopt;
            }
            case BoolExpr::Kind::Forall:
            case BoolExpr::Kind::Exists: {
                bool universal = b->kind == BoolExpr::Kind::Forall;
                auto lo = eval_expr(b->e1, env, result);
                auto hi = eval_expr(b->e2, env, result);
                if (!lo || !hi) return std::nullopt;
                bool acc = universal;
                bool undef = false;
                for (i64 i = *lo; i < *hi; ++i) {
                    env.bound_consts[b->name] = i;
                    auto v = eval_spec(b->b1, env, result);
                    env.bound_consts.erase(b->name);
                    if (!v) {
                        undef = true;
                        continue;
                    }
                    if (universal && !*v) return false;
                    if (!universal && *v) return true;
                }
                if (undef) return std::nullopt;
                return acc;
            }
            case BoolExpr::Kind::AllDifferent: {
                auto it = env.arrays->find(b->name);
                if (it == env.arrays->end()) return std::nullopt;
                for (size_t i = 0; i < it->second.size(); ++i)
                    for (size_t j = i + 1; j < it->second.size(); ++j)
                        if (it->second[i] == it->second[j]) return false;
                return true;
            }
        }
        return std::nullopt;
    }

    std::optional<i64> eval_expr(const ExprPtr& e, detail::InterpEnv& env,
                                 const std::optional<i64>& result) {
        switch (e->kind) {
            case Expr::Kind::IntLit: return e->value;
            case Expr::Kind::Var: {
                if (e->name == "result") return result;
                auto b = env.bound_consts.find(e->name);
                if (b != env.bound_consts.end()) return b->second;
                auto it = env.scalars.find(e->name);
                if (it == env.scalars.end()) return std::nullopt;
                return it->second;
            }
            case Expr::Kind::ArrayRead: {
                auto it = env.arrays->find(e->name);
                if (it == env.arrays->end()) return std::nullopt;
                auto idx = eval_expr(e->lhs, env, result);
                if (!idx || *idx < 0 || *idx >= static_cast<i64>(it->second.size()))
                    return std::nullopt;
                return it->second[static_cast<size_t>(*idx)];
            }
            default: {
                auto a = eval_expr(e->lhs, env, result);
                if (!a) return std::nullopt;
                auto b = eval_expr(e->rhs, env, result);
                if (!b) return std::nullopt;
                std::optional<i64> r;
                switch (e->kind) {
                    case Expr::Kind::Add: r = checked_add(*a, *b); break;
                    case Expr::Kind::Sub: r = checked_sub(*a, *b); break;
                    case Expr::Kind::Mul: r = checked_mul(*a, *b); break;
                    case Expr::Kind::Div: r = checked_div(*a, *b); break;
                    default: break;
                }
                if (r && check_overflow_ && !fits(*r, bits_)) overflow_hit_ = true;
                return r;
            }
        }
    }

private:
    struct Flow {
        enum class Kind {
            Finished,
            Returned,
            AssertFailed,
            ContractFailed,
            OverflowFailed,
            OutOfDomain,
            StepLimit
        };
        Kind kind = Kind::Finished;
        i64 value = 0;
        int line = 0;

        static Flow finished() { return {}; }
        static Flow fail(Kind k, int line = 0) { return {k, 0, line}; }
    };

    Flow run_body(const ProgramAst& fn, detail::InterpEnv& env, bool record_trace) {
        for (const auto& s : fn.body) {
            Flow f = exec(fn, *s, env, record_trace);
            if (f.kind != Flow::Kind::Finished) return f;
        }
        return Flow::finished();
    }

    Flow exec(const ProgramAst& fn, const Instr& ins, detail::InterpEnv& env, bool record_trace) {
        if (++steps_ > step_limit_) return Flow::fail(Flow::Kind::StepLimit);
        switch (ins.kind) {
            case Instr::Kind::AssignScalar: {
                overflow_hit_ = false;
                auto v = eval_expr(ins.value, env, std::nullopt);
                if (check_overflow_ && overflow_hit_)
                    return Flow::fail(Flow::Kind::OverflowFailed, display_line(fn, ins.pos));
                if (!v) return Flow::fail(Flow::Kind::OutOfDomain);
                if (!fits(*v, bits_)) {
                    if (check_overflow_)
                        return Flow::fail(Flow::Kind::OverflowFailed, display_line(fn, ins.pos));
                    return Flow::fail(Flow::Kind::OutOfDomain);
                }
                env.scalars[ins.target] = *v;
                return Flow::finished();
            }
            case Instr::Kind::AssignArray: {
                auto idx = eval_expr(ins.index, env, std::nullopt);
                if (!idx) return Flow::fail(Flow::Kind::OutOfDomain);
                overflow_hit_ = false;
                auto v = eval_expr(ins.value, env, std::nullopt);
                if (check_overflow_ && overflow_hit_)
                    return Flow::fail(Flow::Kind::OverflowFailed, display_line(fn, ins.pos));
                if (!v) return Flow::fail(Flow::Kind::OutOfDomain);
                auto arr = env.arrays->find(ins.target);
                if (arr == env.arrays->end() || *idx < 0 ||
                    *idx >= static_cast<i64>(arr->second.size()))
                    return Flow::fail(Flow::Kind::OutOfDomain);
                if (!fits(*v, bits_)) {
                    if (check_overflow_)
                        return Flow::fail(Flow::Kind::OverflowFailed, display_line(fn, ins.pos));
                    return Flow::fail(Flow::Kind::OutOfDomain);
                }
                arr->second[static_cast<size_t>(*idx)] = *v;
                return Flow::finished();
            }
            case Instr::Kind::If:
            case Instr::Kind::While: {
                bool is_while = ins.kind == Instr::Kind::While;
                while (true) {
                    if (++steps_ > step_limit_) return Flow::fail(Flow::Kind::StepLimit);
                    auto c = eval_spec(ins.cond, env, std::nullopt);
                    if (!c) return Flow::fail(Flow::Kind::OutOfDomain);
                    if (record_trace)
                        trace_.push_back(DecisionTag{*c, display_line(fn, ins.pos)});
                    if (!*c) {
                        if (!is_while && ins.else_branch)
                            return exec(fn, *ins.else_branch, env, record_trace);
                        return Flow::finished();
                    }
                    Flow f = exec(fn, *ins.then_branch, env, record_trace);
                    if (f.kind != Flow::Kind::Finished) return f;
                    if (!is_while) return Flow::finished();
                }
            }
            case Instr::Kind::Assert: {
                auto c = eval_spec(ins.cond, env, std::nullopt);
                if (!c) return Flow::fail(Flow::Kind::OutOfDomain);
                if (!*c) return Flow::fail(Flow::Kind::AssertFailed, display_line(fn, ins.pos));
                return Flow::finished();
            }
            case Instr::Kind::Enforce: {
                auto c = eval_spec(ins.cond, env, std::nullopt);
                if (!c || !*c) return Flow::fail(Flow::Kind::OutOfDomain);
                return Flow::finished();
            }
            case Instr::Kind::Return: {
                overflow_hit_ = false;
                auto v = eval_expr(ins.value, env, std::nullopt);
                if (check_overflow_ && overflow_hit_)
                    return Flow::fail(Flow::Kind::OverflowFailed, display_line(fn, ins.pos));
                if (!v) return Flow::fail(Flow::Kind::OutOfDomain);
                if (!fits(*v, bits_)) {
                    if (check_overflow_)
                        return Flow::fail(Flow::Kind::OverflowFailed, display_line(fn, ins.pos));
                    return Flow::fail(Flow::Kind::OutOfDomain);
                }
                Flow f;
                f.kind = Flow::Kind::Returned;
                f.value = *v;
                return f;
            }
            case Instr::Kind::Block: {
                for (const auto& s : ins.body) {
                    Flow f = exec(fn, *s, env, record_trace);
                    if (f.kind != Flow::Kind::Finished) return f;
                }
                return Flow::finished();
            }
            case Instr::Kind::Call: return exec_call(fn, ins, env);
        }
        return Flow::finished();
    }

    Flow exec_call(const ProgramAst& fn, const Instr& ins, detail::InterpEnv& env) {
        auto body = bodies_.find(ins.callee);
        if (body == bodies_.end())
            throw VerifyError("no body for callee '" + ins.callee + "' in concrete execution");
        const ProgramAst& callee = *body->second;
        if (callee.params.size() != ins.args.size())
            throw VerifyError("arity mismatch calling '" + ins.callee + "'");
        detail::InterpEnv inner{{}, env.arrays, {}};
        std::map<std::string, std::string> array_alias;  // formal -> caller array
        for (size_t i = 0; i < callee.params.size(); ++i) {
            const Param& p = callee.params[i];
            if (p.is_array) {
                if (ins.args[i]->kind != Expr::Kind::Var)
                    throw VerifyError("array argument of '" + ins.callee +
                                      "' must be an array name");
                array_alias[p.name] = ins.args[i]->name;
            } else {
                auto v = eval_expr(ins.args[i], env, std::nullopt);
                if (!v) return Flow::fail(Flow::Kind::OutOfDomain);
                inner.scalars[p.name] = *v;
            }
        }
        // formal array names alias the caller's arrays
        std::map<std::string, std::vector<i64>> renamed;
        for (const auto& [formal, actual] : array_alias) renamed[formal] = (*env.arrays)[actual];
        std::map<std::string, std::vector<i64>> saved;  // for the modifies check
        auto ctr = contracts_.find(ins.callee);
        inner.arrays = &renamed;
        for (const auto& [formal, vals] : renamed) saved[formal] = vals;

        auto pre = eval_spec_in(callee.precondition, inner);
        if (!pre) return Flow::fail(Flow::Kind::OutOfDomain);
        if (!*pre) return Flow::fail(Flow::Kind::ContractFailed, display_line(fn, ins.pos));

        Flow f = run_body(callee, inner, /*record_trace=*/false);
        if (f.kind == Flow::Kind::Finished) return Flow::fail(Flow::Kind::OutOfDomain);
        if (f.kind != Flow::Kind::Returned) return f;

        // arrays not declared modifiable must come back unchanged
        for (const auto& [formal, before] : saved) {
            bool declared = false;
            if (ctr != contracts_.end())
                for (const auto& m : ctr->second.modifies) declared = declared || m == formal;
            if (!declared && renamed[formal] != before)
                return Flow::fail(Flow::Kind::ContractFailed, display_line(fn, ins.pos));
        }
        for (const auto& [formal, actual] : array_alias) (*env.arrays)[actual] = renamed[formal];

        if (!fits(f.value, bits_)) return Flow::fail(Flow::Kind::OutOfDomain);
        env.scalars[ins.target] = f.value;
        return Flow::finished();
    }

    std::optional<bool> eval_spec_in(const BoolPtr& b, detail::InterpEnv& env) {
        return eval_spec(b, env, std::nullopt);
    }

    const ProgramAst& main_;
    const std::map<std::string, const ProgramAst*>& bodies_;
    const std::map<std::string, Contract>& contracts_;
    int bits_;
    bool check_overflow_;
    i64 step_limit_;
    i64 steps_ = 0;
    bool overflow_hit_ = false;
    std::vector<DecisionTag> trace_;
    std::map<std::string, std::vector<i64>> arrays_;
};

}  // namespace detail

/// Runs the program on one concrete input.
inline ExecResult concrete_interpret(const ProgramAst& ast, const ConcreteInput& input,
                                     int bits = 8, bool check_overflow = false,
                                     const std::map<std::string, const ProgramAst*>& bodies = {},
                                     i64 step_limit = 1'000'000) {
    std::map<std::string, Contract> contracts;
    for (const auto& c : ast.contracts) contracts[c.name] = c;
    detail::Interpreter in(ast, bodies, contracts, bits, check_overflow, step_limit);
    return in.run(input);
}

struct BruteResult {
    ExecVerdict verdict = ExecVerdict::PartiallyCorrect;
    std::optional<ConcreteInput> witness;
    std::vector<DecisionTag> witness_trace;  // up to the violating event
    i64 inputs_checked = 0;
    i64 inputs_admitted = 0;
};

/// Depth-first exploration order over decision traces: true before false at
/// each divergence, and an event on a prefix before anything beneath it.
inline bool trace_before(const std::vector<DecisionTag>& a, const std::vector<DecisionTag>& b) {
    size_t n = std::min(a.size(), b.size());
    for (size_t i = 0; i < n; ++i)
        if (a[i].taken_true != b[i].taken_true) return a[i].taken_true;
    return a.size() < b.size();
}

namespace detail {

inline bool mentions_result(const BoolPtr& b) {
    if (!b) return false;
    auto expr_mentions = [](const ExprPtr& e) {
        struct W {
            static bool walk(const ExprPtr& x) {
                if (!x) return false;
                if (x->kind == Expr::Kind::Var && x->name == "result") return true;
                return walk(x->lhs) || walk(x->rhs);
            }
        };
        return W::walk(e);
    };
    if (expr_mentions(b->e1) || expr_mentions(b->e2)) return true;
    return mentions_result(b->b1) || mentions_result(b->b2);
}

}  // namespace detail

/// Exhaustive verification over all k-bit inputs satisfying the
/// precondition. The verdict contract matches explore(); executionsleaving
/// the bounded domain or hitting the step limit are outside the model.
inline BruteResult brute_force_verify(const ProgramAst& ast, int bits,
                                      const std::map<std::string, const ProgramAst*>& bodies = {},
                                      i64 space_limit = 2'000'000, i64 step_limit = 200'000) {
    std::map<std::string, i64> lengths = array_lengths(ast.params);
    std::vector<std::pair<std::string, i64>> slots;  // (scalar name | array:idx)
    for (const auto& p : ast.params) {
        if (p.is_array)
            for (i64 i = 0; i < lengths.at(p.name); ++i) slots.emplace_back(p.name, i);
        else
            slots.emplace_back(p.name, -1);
    }
    i64 range = max_value(bits) - min_value(bits) + 1;
    double space = 1;
    for (size_t i = 0; i < slots.size(); ++i) {
        space *= static_cast<double>(range);
        if (space > static_cast<double>(space_limit))
            throw VerifyError("input space too large for exhaustive verification");
    }

    std::map<std::string, Contract> contracts;
    for (const auto& c : ast.contracts) contracts[c.name] = c;
    detail::Interpreter interp(ast, bodies, contracts, bits, false, step_limit);

    BruteResult res;
    bool mentions = detail::mentions_result(ast.postcondition);
    bool have_event = false;
    std::vector<DecisionTag> best_trace;
    std::vector<i64> cursor(slots.size(), min_value(bits));
    while (true) {
        ConcreteInput input;
        for (size_t i = 0; i < slots.size(); ++i) {
            const auto& [name, idx] = slots[i];
            if (idx < 0) {
                input.scalars[name] = cursor[i];
            } else {
                auto& arr = input.arrays[name];
                if (arr.empty()) arr.resize(static_cast<size_t>(lengths.at(name)), 0);
                arr[static_cast<size_t>(idx)] = cursor[i];
            }
        }
        // arrays with no slots cannot happen (positive lengths); scalars done
        ++res.inputs_checked;

        detail::InterpEnv pre_env{input.scalars, &input.arrays, {}};
        auto pre = interp.eval_spec(ast.precondition, pre_env, std::nullopt);
        if (pre && *pre) {
            ++res.inputs_admitted;
            ExecResult r = interp.run(input);
            bool violated = false;
            ExecVerdict kind = ExecVerdict::PartiallyCorrect;
            switch (r.outcome) {
                case ExecResult::Outcome::AssertFailed:
                    violated = true;
                    kind = ExecVerdict::AssertionViolation;
                    break;
                case ExecResult::Outcome::ContractFailed:
                    violated = true;
                    kind = ExecVerdict::ContractViolation;
                    break;
                case ExecResult::Outcome::OverflowFailed:
                    violated = true;
                    kind = ExecVerdict::OverflowViolation;
                    break;
                case ExecResult::Outcome::OutOfDomain:
                case ExecResult::Outcome::StepLimit: break;  // outside the bounded model
                case ExecResult::Outcome::Returned:
                case ExecResult::Outcome::NoReturn: {
                    detail::InterpEnv post_env{r.final_scalars, &r.final_arrays, {}};
                    if (r.outcome == ExecResult::Outcome::Returned) {
                        auto post = interp.eval_spec(ast.postcondition, post_env, r.value);
                        if (post && !*post) {
                            violated = true;
                            kind = ExecVerdict::PostconditionViolation;
                        }
                    } else if (mentions) {
                        // no return: the result variable is unconstrained
                        for (i64 rv = min_value(bits); rv <= max_value(bits); ++rv) {
                            auto post = interp.eval_spec(ast.postcondition, post_env, rv);
                            if (post && !*post) {
                                violated = true;
                                kind = ExecVerdict::PostconditionViolation;
                                break;
                            }
                        }
                    } else {
                        auto post = interp.eval_spec(ast.postcondition, post_env, std::nullopt);
                        if (post && !*post) {
                            violated = true;
                            kind = ExecVerdict::PostconditionViolation;
                        }
                    }
                    break;
                }
            }
            if (violated) {
                // the reported violation is the first in exploration (trace)
                // order, matching the symbolic executor's contract
                if (!have_event || trace_before(r.trace, best_trace)) {
                    have_event = true;
                    best_trace = r.trace;
                    res.verdict = kind;
                    res.witness = input;
                    res.witness_trace = r.trace;
                }
            }
        }

        // odometer
        size_t i = slots.size();
        while (i > 0) {
            --i;
            if (cursor[i] < max_value(bits)) {
                ++cursor[i];
                break;
            }
            cursor[i] = min_value(bits);
            if (i == 0) return res;
        }
        if (slots.empty()) return res;
    }
}

}  // namespace cpbpv
