#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "cpbpv/corpus.hpp"
#include "cpbpv/report.hpp"

namespace cpbpv {

// Command-line driver, callable in-process for tests.
//
// Exit codes: 0 partially correct; 1 postcondition violation; 2 assertion,
// contract or overflow violation; 3 parse/usage error; 4 resource budget
// exceeded. CPBPV_SEED is reserved and ignored: the search is deterministic.

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"bounded program verifier for .cpv contract programs"};
    app.name("verify");

    std::string file;
    std::vector<std::string> param_args;
    RunOptions opts;
    std::string json_path;
    std::string contracts_dir;

    app.add_option("file", file, "program to verify (one function per .cpv file)")->required();
    app.add_option("--param", param_args, "bind a symbolic bound, e.g. --param N=8")
        ->type_name("NAME=INT");
    app.add_option("--bits", opts.bits, "signed integer width in bits (2..31)")
        ->default_val(8);
    app.add_flag("--check-overflow", opts.check_overflow,
                 "verify that every assigned value fits the integer width");
    app.add_option("--max-depth", opts.max_depth, "nondeterministic choices allowed per path")
        ->default_val(10'000);
    app.add_option("--node-budget", opts.node_budget, "search nodes per satisfiability call")
        ->default_val(10'000'000);
    app.add_option("--json", json_path, "write the JSON report to this file");
    app.add_option("--contracts", contracts_dir, "directory of .cpv contract declarations");
    app.add_option("--jobs", opts.jobs, "exploration worker threads")->default_val(1);
    app.add_flag("--timings", opts.include_timing, "include wall time in the JSON report");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 3;
    }

    try {
        for (const auto& p : param_args) {
            auto eq = p.find('=');
            if (eq == std::string::npos)
                throw VerifyError("--param expects NAME=INT, got '" + p + "'");
            opts.params[p.substr(0, eq)] = std::stoll(p.substr(eq + 1));
        }
        if (opts.bits < 2 || opts.bits > 31) throw VerifyError("--bits must be in [2, 31]");
        if (opts.jobs < 1) throw VerifyError("--jobs must be at least 1");

        if (!contracts_dir.empty()) {
            namespace fs = std::filesystem;
            std::vector<fs::path> files;
            for (const auto& entry : fs::directory_iterator(contracts_dir))
                if (entry.path().extension() == ".cpv") files.push_back(entry.path());
            std::sort(files.begin(), files.end());
            for (const auto& f : files) {
                auto cs = parse_contracts(read_file(f.string()));
                opts.extra_contracts.insert(opts.extra_contracts.end(), cs.begin(), cs.end());
            }
        }

        std::string source = read_file(file);
        RunResult res = run_verification(source, opts);

        if (!json_path.empty()) {
            std::ofstream jf(json_path, std::ios::binary);
            if (!jf) throw VerifyError("cannot write '" + json_path + "'");
            jf << report_json_text(res.program.name, opts, res);
        }
        print_text_report(out, res.program.name, opts, res);
        return exit_code(res.report.verdict);
    } catch (const ParseError& e) {
        err << file << ":" << e.what() << "\n";
        return 3;
    } catch (const ResourceLimitError& e) {
        err << "resource limit: " << e.what() << "\n";
        return 4;
    } catch (const VerifyError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 5;
    }
}

}  // namespace cpbpv
