#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cpbpv/cli.hpp"
#include "cpbpv/corpus.hpp"

using namespace cpbpv;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("cpbpv_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name, const std::string& content) {
        std::ofstream out(path / name, std::ios::binary);
        out << content;
        return (path / name).string();
    }
    std::string read(const std::string& name) {
        std::ifstream in(path / name, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
};

int run(const std::vector<std::string>& args, std::string* out_text = nullptr) {
    std::ostringstream out, err;
    int rc = run_cli(args, out, err);
    if (out_text) *out_text = out.str() + err.str();
    return rc;
}

}  // namespace

TEST_CASE("exit codes follow the driver contract") {
    TempDir td;
    std::string good = td.file("bs.cpv", corpus_entry("binary_search").source);
    std::string bad = td.file("bs_bug.cpv", corpus_entry("binary_search_bug").source);
    std::string assert_prog = td.file("a.cpv",
                                      "int f(int x) {\n"
                                      "    assert(x > 0);\n"
                                      "    return x;\n"
                                      "}\n");
    CHECK(run({good, "--param", "N=4", "--bits", "8"}) == 0);
    CHECK(run({bad, "--param", "N=8", "--bits", "8"}) == 1);
    CHECK(run({assert_prog}) == 2);
    CHECK(run({td.path.string() + "/missing.cpv"}) == 3);
    std::string parse_err = td.file("p.cpv", "int f( { }");
    CHECK(run({parse_err}) == 3);
    std::string unbound = td.file("u.cpv", corpus_entry("binary_search").source);
    CHECK(run({unbound}) == 3);  // missing --param N
    CHECK(run({good, "--param", "N=4", "--bits", "99"}) == 3);
    // a tiny node budget is a resource error, never a wrong verdict
    CHECK(run({bad, "--param", "N=8", "--node-budget", "0"}) == 4);
}

TEST_CASE("json reports are deterministic and carry the schema version") {
    TempDir td;
    std::string bad = td.file("bs_bug.cpv", corpus_entry("binary_search_bug").source);
    CHECK(run({bad, "--param", "N=8", "--json", (td.path / "r1.json").string()}) == 1);
    CHECK(run({bad, "--param", "N=8", "--json", (td.path / "r2.json").string()}) == 1);
    std::string r1 = td.read("r1.json");
    CHECK(r1 == td.read("r2.json"));

    auto j = nlohmann::json::parse(r1);
    CHECK(j["schema_version"] == 1);
    CHECK(j["verdict"] == "postcondition_violation");
    CHECK(j["witness"]["inputs"]["arrays"]["t"].size() == 8);
    CHECK(j["witness"]["replay"]["violation_confirmed"] == true);
    CHECK(j["paths"]["complete"].get<int>() > 0);
    // the required pruned subtrees appear in the log
    auto pruned = j["pruned_paths"].get<std::vector<std::string>>();
    auto has = [&](const std::string& s) {
        for (const auto& p : pruned)
            if (p == s) return true;
        return false;
    };
    CHECK(has("T4,F6,F8,T4,T6"));
    CHECK(has("T4,F6,F8,T4,F6,T8"));
}

TEST_CASE("witnesses project to version-zero inputs only") {
    TempDir td;
    std::string bad = td.file("bs_bug.cpv", corpus_entry("binary_search_bug").source);
    CHECK(run({bad, "--param", "N=8", "--json", (td.path / "r.json").string()}) == 1);
    auto j = nlohmann::json::parse(td.read("r.json"));
    auto scalars = j["witness"]["inputs"]["scalars"];
    auto arrays = j["witness"]["inputs"]["arrays"];
    CHECK(scalars.size() == 1);  // v only: no locals, no intermediate versions
    CHECK(scalars.contains("v"));
    CHECK(arrays.size() == 1);
    CHECK(arrays.contains("t"));
}

TEST_CASE("timing is excluded from json unless requested") {
    TempDir td;
    std::string good = td.file("bs.cpv", corpus_entry("binary_search").source);
    CHECK(run({good, "--param", "N=4", "--json", (td.path / "r.json").string()}) == 0);
    auto j = nlohmann::json::parse(td.read("r.json"));
    CHECK_FALSE(j.contains("wall_ms"));
    CHECK(run({good, "--param", "N=4", "--json", (td.path / "t.json").string(), "--timings"}) ==
          0);
    auto jt = nlohmann::json::parse(td.read("t.json"));
    CHECK(jt.contains("wall_ms"));
}

TEST_CASE("a contracts directory supplies callee summaries") {
    TempDir td;
    // split the modular benchmark: the program without the declaration
    std::string caller =
        "ensures forall p in [0, N - 1): t[p] <= t[p + 1]\n"
        "int selection_sort(int[N] t) {\n"
        "    int i = 0;\n"
        "    while (i < N - 1) {\n"
        "        int m = find_min(t, i);\n"
        "        int tmp = t[i];\n"
        "        t[i] = t[m];\n"
        "        t[m] = tmp;\n"
        "        i = i + 1;\n"
        "    }\n"
        "    return 0;\n"
        "}\n";
    std::string prog = td.file("ss.cpv", caller);
    std::filesystem::create_directories(td.path / "contracts");
    {
        std::ofstream out(td.path / "contracts" / "find_min.cpv", std::ios::binary);
        out << "requires 0 <= i && i < N\n"
               "ensures i <= result && result < N\n"
               "     && forall j in [i, N): t[result] <= t[j]\n"
               "int find_min(int[N] t, int i);\n";
    }
    // without the contract the callee is unknown
    CHECK(run({prog, "--param", "N=4"}) == 3);
    CHECK(run({prog, "--param", "N=4", "--contracts", (td.path / "contracts").string()}) == 0);
}

TEST_CASE("parallel exploration reproduces the single-threaded verdict and witness") {
    TempDir td;
    std::string bad = td.file("bs_bug.cpv", corpus_entry("binary_search_bug").source);
    CHECK(run({bad, "--param", "N=8", "--json", (td.path / "s.json").string()}) == 1);
    CHECK(run({bad, "--param", "N=8", "--jobs", "4", "--json", (td.path / "p.json").string()}) ==
          1);
    auto s = nlohmann::json::parse(td.read("s.json"));
    auto p = nlohmann::json::parse(td.read("p.json"));
    CHECK(s["verdict"] == p["verdict"]);
    CHECK(s["witness"]["inputs"] == p["witness"]["inputs"]);
    CHECK(s["witness"]["trace"] == p["witness"]["trace"]);
    CHECK(s["paths"] == p["paths"]);
}

TEST_CASE("the text report names the verdict and the witness") {
    TempDir td;
    std::string bad = td.file("t.cpv", corpus_entry("tritype_bug").source);
    std::string text;
    CHECK(run({bad}, &text) == 1);
    CHECK(text.find("postcondition_violation") != std::string::npos);
    CHECK(text.find("witness") != std::string::npos);
}
