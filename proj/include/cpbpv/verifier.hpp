#pragma once

#include <chrono>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cpbpv/executor.hpp"
#include "cpbpv/interpreter.hpp"
#include "cpbpv/parser.hpp"

namespace cpbpv {

/// Everything a verification run needs besides the source text.
struct RunOptions {
    std::map<std::string, i64> params;  // bindings for symbolic bounds
    int bits = 8;
    bool check_overflow = false;
    i64 max_depth = 10'000;
    i64 node_budget = 10'000'000;
    int jobs = 1;
    std::vector<Contract> extra_contracts;  // e.g. from a contracts directory
    bool include_timing = false;

    ExecOptions exec_options() const {
        ExecOptions e;
        e.solver.bits = bits;
        e.solver.node_budget = node_budget;
        e.check_overflow = check_overflow;
        e.max_depth = max_depth;
        e.jobs = jobs;
        return e;
    }
};

struct WitnessValidation {
    bool performed = false;     // concrete replay needs callee bodies
    bool pre_holds = false;
    bool trace_matches = false;
    bool outcome_confirmed = false;

    bool ok() const { return !performed || (pre_holds && trace_matches && outcome_confirmed); }
};

struct RunResult {
    ProgramAst program;  // after parameter substitution
    VerificationReport report;
    ConcreteInput witness_inputs;        // version-0 projection of the witness
    std::optional<i64> witness_result;   // result variable, when constrained
    WitnessValidation validation;
};

namespace detail {

inline bool has_calls(const std::vector<InstrPtr>& body) {
    struct W {
        static bool walk(const InstrPtr& s) {
            if (s->kind == Instr::Kind::Call) return true;
            if (s->then_branch && walk(s->then_branch)) return true;
            if (s->else_branch && walk(s->else_branch)) return true;
            for (const auto& b : s->body)
                if (walk(b)) return true;
            return false;
        }
    };
    for (const auto& s : body)
        if (W::walk(s)) return true;
    return false;
}

}  // namespace detail

/// Projects the full violation model onto the program's inputs (version 0),
/// defaulting never-mentioned inputs to 0.
inline ConcreteInput project_inputs(const ProgramAst& ast, const Model& m) {
    ConcreteInput in;
    for (const auto& p : ast.params) {
        if (p.is_array) {
            i64 n = p.length->value;
            std::vector<i64> xs(static_cast<size_t>(n), 0);
            auto it = m.arrays.find({p.name, 0});
            if (it != m.arrays.end())
                for (size_t i = 0; i < xs.size() && i < it->second.size(); ++i)
                    xs[i] = it->second[i];
            in.arrays[p.name] = std::move(xs);
        } else {
            auto it = m.scalars.find({p.name, 0});
            in.scalars[p.name] = it == m.scalars.end() ? 0 : it->second;
        }
    }
    return in;
}

/// Replays a violation witness through the concrete interpreter and checks
/// that it (a) satisfies the precondition, (b) reproduces the decision trace,
/// and (c) exhibits the reported violation.
inline WitnessValidation validate_witness(const ProgramAst& ast, const Violation& v,
                                          const ConcreteInput& inputs, int bits,
                                          bool overflow_mode,
                                          const std::map<std::string, const ProgramAst*>& bodies = {}) {
    WitnessValidation out;
    if (detail::has_calls(ast.body) && bodies.empty()) return out;  // needs callee bodies
    out.performed = true;

    std::map<std::string, std::vector<i64>> arrays = inputs.arrays;
    std::map<std::string, i64> scalars = inputs.scalars;
    cpbpv::detail::InterpEnv env{scalars, &arrays, {}};
    std::map<std::string, Contract> contracts;
    for (const auto& c : ast.contracts) contracts[c.name] = c;
    cpbpv::detail::Interpreter interp(ast, bodies, contracts, bits, overflow_mode, 1'000'000);
    auto pre = interp.eval_spec(ast.precondition, env, std::nullopt);
    out.pre_holds = pre && *pre;

    ExecResult r = interp.run(inputs);
    out.trace_matches = r.trace.size() == v.trace.size();
    for (size_t i = 0; out.trace_matches && i < r.trace.size(); ++i)
        out.trace_matches = r.trace[i].taken_true == v.trace[i].taken_true &&
                            r.trace[i].line == v.trace[i].line;

    switch (v.kind) {
        case ExecVerdict::AssertionViolation:
            out.outcome_confirmed = r.outcome == ExecResult::Outcome::AssertFailed;
            break;
        case ExecVerdict::ContractViolation:
            out.outcome_confirmed = r.outcome == ExecResult::Outcome::ContractFailed;
            break;
        case ExecVerdict::OverflowViolation:
            out.outcome_confirmed = r.outcome == ExecResult::Outcome::OverflowFailed;
            break;
        case ExecVerdict::PostconditionViolation: {
            if (r.outcome != ExecResult::Outcome::Returned &&
                r.outcome != ExecResult::Outcome::NoReturn)
                break;
            cpbpv::detail::InterpEnv post_env{r.final_scalars, &r.final_arrays, {}};
            std::optional<i64> result;
            if (r.outcome == ExecResult::Outcome::Returned) {
                result = r.value;
            } else {
                auto it = v.witness.scalars.find({"result", 0});
                if (it != v.witness.scalars.end()) result = it->second;
            }
            auto post = interp.eval_spec(ast.postcondition, post_env, result);
            out.outcome_confirmed = post && !*post;
            break;
        }
        case ExecVerdict::PartiallyCorrect: break;
    }
    return out;
}

/// Parse, bind, explore, validate: the full pipeline behind the CLI.
inline RunResult run_verification(const std::string& source, const RunOptions& opts,
                                  const std::map<std::string, const ProgramAst*>& bodies = {}) {
    ProgramAst parsed = parse_program(source);
    for (const auto& b : symbolic_bounds(parsed))
        if (!opts.params.count(b))
            throw VerifyError("missing binding for symbolic bound '" + b +
                              "' (pass --param " + b + "=<int>)");
    RunResult res;
    res.program = substitute_params(parsed, opts.params);
    std::vector<Contract> extra;
    for (const auto& c : opts.extra_contracts) extra.push_back(substitute_params(c, opts.params));

    auto t0 = std::chrono::steady_clock::now();
    res.report = explore(res.program, std::move(extra), opts.exec_options());
    auto t1 = std::chrono::steady_clock::now();
    res.report.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

    if (res.report.violation) {
        const Violation& v = *res.report.violation;
        res.witness_inputs = project_inputs(res.program, v.witness);
        auto it = v.witness.scalars.find({"result", 0});
        if (it != v.witness.scalars.end()) res.witness_result = it->second;
        res.validation = validate_witness(res.program, v, res.witness_inputs, opts.bits,
                                          opts.check_overflow, bodies);
        if (res.validation.performed && !res.validation.ok())
            throw std::logic_error("witness failed concrete replay: pre=" +
                                   std::to_string(res.validation.pre_holds) +
                                   " trace=" + std::to_string(res.validation.trace_matches) +
                                   " outcome=" + std::to_string(res.validation.outcome_confirmed));
    }
    return res;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw VerifyError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace cpbpv
