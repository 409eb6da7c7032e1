#pragma once

#include <json.hpp>

#include <iomanip>
#include <ostream>
#include <sstream>

#include "cpbpv/verifier.hpp"

namespace cpbpv {

// Machine-readable and human-readable verification reports. JSON output is
// deterministic (insertion-ordered keys, no timing unless asked for), so
// repeated single-threaded runs are byte-identical.

inline constexpr int kReportSchemaVersion = 1;

using ordered_json = nlohmann::ordered_json;

inline ordered_json report_json(const std::string& program_name, const RunOptions& opts,
                                const RunResult& res) {
    const VerificationReport& rep = res.report;
    ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["program"] = program_name;
    {
        ordered_json o;
        ordered_json params = ordered_json::object();
        for (const auto& [k, v] : opts.params) params[k] = v;
        o["params"] = params;
        o["bits"] = opts.bits;
        o["check_overflow"] = opts.check_overflow;
        o["max_depth"] = opts.max_depth;
        o["node_budget"] = opts.node_budget;
        o["jobs"] = opts.jobs;
        j["options"] = o;
    }
    j["verdict"] = to_string(rep.verdict);
    if (rep.violation) {
        ordered_json w;
        ordered_json scalars = ordered_json::object();
        for (const auto& [k, v] : res.witness_inputs.scalars) scalars[k] = v;
        ordered_json arrays = ordered_json::object();
        for (const auto& [k, v] : res.witness_inputs.arrays) arrays[k] = v;
        w["inputs"] = ordered_json::object();
        w["inputs"]["scalars"] = scalars;
        w["inputs"]["arrays"] = arrays;
        if (res.witness_result) w["result"] = *res.witness_result;
        w["trace"] = to_string(rep.violation->trace);
        w["detail"] = rep.violation->detail;
        if (res.validation.performed) {
            w["replay"] = ordered_json::object();
            w["replay"]["precondition_holds"] = res.validation.pre_holds;
            w["replay"]["trace_matches"] = res.validation.trace_matches;
            w["replay"]["violation_confirmed"] = res.validation.outcome_confirmed;
        }
        j["witness"] = w;
    } else {
        j["witness"] = nullptr;
    }
    {
        ordered_json p;
        p["complete"] = rep.complete_paths;
        p["infeasible_complete"] = rep.infeasible_complete_paths;
        p["pruned_branches"] = rep.pruned_branches;
        p["enforce_prunes"] = rep.enforce_prunes;
        p["violations_found"] = rep.violations_found;
        j["paths"] = p;
    }
    j["pruned_paths"] = rep.pruned_log;
    j["pruned_paths_dropped"] = rep.pruned_log_dropped;
    {
        ordered_json arr = ordered_json::array();
        for (const auto& pr : rep.paths) {
            ordered_json e;
            e["trace"] = pr.trace;
            e["feasible"] = pr.feasible;
            e["violating"] = pr.violating;
            arr.push_back(e);
        }
        j["complete_paths"] = arr;
        j["complete_paths_dropped"] = rep.paths_dropped;
    }
    {
        ordered_json s;
        s["cheap_calls"] = rep.solver.cheap_calls;
        s["cheap_unsat"] = rep.solver.cheap_unsat;
        s["complete_calls"] = rep.solver.complete_calls;
        s["search_decisions"] = rep.solver.search.decisions;
        s["propagations"] = rep.solver.search.propagations;
        s["order_rejects"] = rep.solver.search.order_rejects;
        j["solver"] = s;
    }
    if (opts.include_timing) j["wall_ms"] = rep.wall_ms;
    return j;
}

inline std::string report_json_text(const std::string& program_name, const RunOptions& opts,
                                    const RunResult& res) {
    return report_json(program_name, opts, res).dump(2) + "\n";
}

inline void print_text_report(std::ostream& os, const std::string& program_name,
                              const RunOptions& opts, const RunResult& res) {
    const VerificationReport& rep = res.report;
    os << "program:  " << program_name << "\n";
    os << "options:  bits=" << opts.bits;
    for (const auto& [k, v] : opts.params) os << " " << k << "=" << v;
    if (opts.check_overflow) os << " check-overflow";
    if (opts.jobs > 1) os << " jobs=" << opts.jobs;
    os << "\n";
    os << "verdict:  " << to_string(rep.verdict) << "\n";
    if (rep.violation) {
        os << "witness:";
        for (const auto& [k, v] : res.witness_inputs.scalars) os << "  " << k << " = " << v;
        for (const auto& [k, xs] : res.witness_inputs.arrays) {
            os << "  " << k << " = [";
            for (size_t i = 0; i < xs.size(); ++i) os << (i ? ", " : "") << xs[i];
            os << "]";
        }
        if (res.witness_result) os << "  result = " << *res.witness_result;
        os << "\n";
        os << "trace:    " << to_string(rep.violation->trace) << "\n";
        os << "detail:   " << rep.violation->detail << "\n";
        if (res.validation.performed)
            os << "replay:   "
               << (res.validation.ok() ? "witness confirmed by concrete execution"
                                       : "witness NOT confirmed")
               << "\n";
    }
    os << "paths:    " << rep.complete_paths << " complete, " << rep.infeasible_complete_paths
       << " infeasible at end, " << rep.pruned_branches << " branches pruned";
    if (rep.enforce_prunes) os << ", " << rep.enforce_prunes << " enforce prunes";
    if (rep.violations_found) os << ", " << rep.violations_found << " violations";
    os << "\n";
    os << "solver:   " << rep.solver.cheap_calls << " cheap calls (" << rep.solver.cheap_unsat
       << " unsat), " << rep.solver.complete_calls << " complete calls, "
       << rep.solver.search.decisions << " decisions, " << rep.solver.search.order_rejects
       << " ordering rejects\n";
    os << std::fixed << std::setprecision(1);
    os << "time:     " << rep.wall_ms << " ms\n";
}

/// Exit code contract of the command-line driver.
inline int exit_code(ExecVerdict v) {
    switch (v) {
        case ExecVerdict::PartiallyCorrect: return 0;
        case ExecVerdict::PostconditionViolation: return 1;
        case ExecVerdict::AssertionViolation:
        case ExecVerdict::ContractViolation:
        case ExecVerdict::OverflowViolation: return 2;
    }
    return 3;
}

}  // namespace cpbpv
