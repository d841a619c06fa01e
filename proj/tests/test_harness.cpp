#include "fwsliding/harness.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fwsliding;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() /
                ("fwsliding_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string file(const std::string &name) const { return (path_ / name).string(); }
    std::string write(const std::string &name, const std::string &content) const {
        std::ofstream(file(name)) << content;
        return file(name);
    }

private:
    fs::path path_;
};

std::string slurp(const std::string &path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string &text) {
    std::vector<std::string> out;
    std::istringstream ss(text);
    for (std::string l; std::getline(ss, l);) out.push_back(l);
    return out;
}

// Drops the trailing elapsed_seconds column of every row.
std::string without_timing(const std::string &csv) {
    std::string out;
    for (const auto &l : lines(csv)) out += l.substr(0, l.rfind(',')) + "\n";
    return out;
}

RunConfig parse(const std::string &text) { return parse_run_config(json::parse(text), text); }

std::string error_of(const std::string &text) {
    try {
        parse(text);
    } catch (const ConfigError &e) {
        return e.what();
    }
    return "";
}

const char *kSpectrahedronRun = R"({
  "instance": {"family": "SPECTRAHEDRON", "m": 60, "n": 8, "density": 0.4, "seed": 5},
  "algorithm": "CGSLS",
  "solver": {"epsilon": 0.001, "l0": 10}
})";

}  // namespace

// ---- config parsing -------------------------------------------------------

TEST(Config, LocateJsonPath) {
    const std::string raw = "{\n  \"a\": {\n    \"b\": [1,\n      {\"c\": 2}]\n  },\n  \"d\": 3\n}";
    EXPECT_EQ(locate_json_path(raw, {std::string("a")}), 2);
    EXPECT_EQ(locate_json_path(raw, {std::string("a"), std::string("b"), std::size_t{1}}), 4);
    EXPECT_EQ(locate_json_path(raw, {std::string("a"), std::string("b"), std::size_t{1}, std::string("c")}), 4);
    EXPECT_EQ(locate_json_path(raw, {std::string("d")}), 6);
    EXPECT_EQ(locate_json_path(raw, {std::string("zzz")}), 0);
}

TEST(Config, DefaultsAndValues) {
    const RunConfig c = parse(kSpectrahedronRun);
    EXPECT_EQ(c.instance.family, Family::Spectrahedron);
    EXPECT_EQ(c.instance.m, 60);
    EXPECT_EQ(c.instance.n, 8);
    EXPECT_DOUBLE_EQ(c.instance.density, 0.4);
    EXPECT_EQ(c.algorithm, Algorithm::CGSLS);
    EXPECT_DOUBLE_EQ(c.solver.epsilon, 1e-3);
    EXPECT_FALSE(c.d_estimate_given);
    EXPECT_EQ(c.solver.schedule, Schedule::LsCubic);
    EXPECT_FALSE(c.outputs.trace_csv.has_value());
}

TEST(Config, NegativeEpsilonNamesFieldAndLine) {
    const std::string msg = error_of(R"({
  "instance": {"family": "SIMPLEX", "m": 5, "n": 3},
  "algorithm": "CGSLS",
  "solver": {
    "epsilon": -0.5
  }
})");
    EXPECT_NE(msg.find("solver.epsilon"), std::string::npos) << msg;
    EXPECT_NE(msg.find("line 5"), std::string::npos) << msg;
}

TEST(Config, UnknownFieldsRejected) {
    EXPECT_NE(error_of(R"({"instance": {"family": "SIMPLEX", "m": 5, "n": 3}, "algorithm": "CG", "extra": 1})")
                  .find("extra"),
              std::string::npos);
    // l0 only exists for CGSLS
    const std::string msg =
        error_of(R"({"instance": {"family": "SIMPLEX", "m": 5, "n": 3}, "algorithm": "CG", "solver": {"l0": 1}})");
    EXPECT_NE(msg.find("solver.l0"), std::string::npos) << msg;
    EXPECT_NE(error_of(R"({"instance": {"family": "SIMPLEX", "m": 5, "n": 3, "k": 2}, "algorithm": "CG"})")
                  .find("instance.k"),
              std::string::npos);
}

TEST(Config, TypeAndEnumErrors) {
    EXPECT_NE(error_of(R"({"instance": {"family": "CUBE", "m": 5, "n": 3}, "algorithm": "CG"})").find("instance.family"),
              std::string::npos);
    EXPECT_NE(error_of(R"({"instance": {"family": "SIMPLEX", "m": 5, "n": 3}, "algorithm": "FW"})").find("algorithm"),
              std::string::npos);
    EXPECT_NE(error_of(R"({"instance": {"family": "SIMPLEX", "m": 5, "n": 3.5}, "algorithm": "CG"})")
                  .find("instance.n"),
              std::string::npos);
    EXPECT_NE(error_of(R"({"instance": {"family": "SIMPLEX", "m": 5, "n": 3}, "algorithm": "CGSLS",
                           "solver": {"schedule": "FIXED_N_QUAD"}})")
                  .find("fixed_n"),
              std::string::npos);
    EXPECT_NE(error_of(R"({"algorithm": "CG"})").find("instance"), std::string::npos);
    EXPECT_NE(error_of(R"({"instance": {"family": "HAMILTONIAN", "m": 5, "n": 30}, "algorithm": "CG"})")
                  .find("instance"),
              std::string::npos);
    EXPECT_NE(error_of(R"({"instance": {"family": "SIMPLEX", "m": 5, "n": 3}, "algorithm": "CGSLS",
                           "solver": {"verify_certificates": 1}})")
                  .find("verify_certificates"),
              std::string::npos);
}

// ---- CSV ------------------------------------------------------------------

TEST(TraceCsv, HeaderAndEmptyCells) {
    TraceRecord r;
    r.k = 1;
    r.l_k = 0.1;
    r.f_y = 1.0 / 3.0;
    std::ostringstream out;
    write_trace_csv(out, {r});
    const auto ls = lines(out.str());
    ASSERT_EQ(ls.size(), 2u);
    EXPECT_EQ(ls[0],
              "k,l_k,gamma,big_gamma,beta,eta,inner_iters,f_y,lower_bound,cert_gap,wolfe_gap,cum_lmo,"
              "cum_backtracks,elapsed_seconds");
    EXPECT_EQ(ls[1], "1,0.10000000000000001,,,,,0,0.33333333333333331,,,,0,0,0");
    EXPECT_EQ(std::stod("0.33333333333333331"), 1.0 / 3.0);
}

// ---- cli_run --------------------------------------------------------------

TEST(CliRun, SimplexDemoConfig) {
    TempDir dir;
    json cfg = json::parse(slurp(std::string(FW_CONFIG_DIR) + "/simplex_demo.json"));
    cfg["outputs"] = {{"trace_csv", dir.file("t.csv")}, {"summary_json", dir.file("s.json")}};
    std::ostringstream out, err;
    ASSERT_EQ(cli_run(dir.write("c.json", cfg.dump(2)), out, err), 0) << err.str();
    const json summary = json::parse(slurp(dir.file("s.json")));
    EXPECT_EQ(summary["termination"], "CERTIFIED");
    EXPECT_LE(summary["f_final"].get<double>(), 0.25 + 1e-6);

    const auto rows = lines(slurp(dir.file("t.csv")));
    ASSERT_EQ(rows.size(), summary["outer_iters"].get<std::size_t>() + 1);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i].substr(0, rows[i].find(',')), std::to_string(i));
    // counters agree with the last trace row
    std::vector<std::string> cells;
    std::stringstream last(rows.back());
    for (std::string c; std::getline(last, c, ',');) cells.push_back(c);
    EXPECT_EQ(std::stol(cells[11]), summary["inner_lmo"].get<long>());
    EXPECT_EQ(std::stol(cells[12]), summary["backtracks"].get<long>());
}

TEST(CliRun, SpectrahedronBoundChecks) {
    TempDir dir;
    json cfg = json::parse(kSpectrahedronRun);
    cfg["outputs"] = {{"summary_json", dir.file("s.json")}};
    std::ostringstream out, err;
    ASSERT_EQ(cli_run(dir.write("c.json", cfg.dump()), out, err), 0) << err.str();
    const json s = json::parse(slurp(dir.file("s.json")));
    EXPECT_EQ(s["bound_checks"]["n_grad_bound"]["result"], "pass");
    for (const char *name : {"n_grad_bound", "n_lin_bound", "inner_iter_bound", "l_bound", "l_monotone",
                             "gamma_sandwich", "sumone_residual", "gamma_recursion", "gamma_range"}) {
        ASSERT_TRUE(s["bound_checks"].contains(name)) << name;
        EXPECT_EQ(s["bound_checks"][name]["result"], "pass") << name;
    }
    for (const char *field : {"instance", "algorithm", "termination", "outer_iters", "inner_lmo", "cert_check_lmo",
                              "backtracks", "f_final", "cert_gap", "elapsed_seconds"}) {
        EXPECT_TRUE(s.contains(field)) << field;
    }
}

TEST(CliRun, ExitCodes) {
    TempDir dir;
    std::ostringstream out, err;
    json capped = json::parse(kSpectrahedronRun);
    capped["solver"]["max_outer"] = 2;
    EXPECT_EQ(cli_run(dir.write("capped.json", capped.dump()), out, err), 2);

    json bad = json::parse(kSpectrahedronRun);
    bad["solver"]["epsilon"] = -1;
    std::ostringstream err2;
    EXPECT_EQ(cli_run(dir.write("bad.json", bad.dump(2)), out, err2), 1);
    EXPECT_NE(err2.str().find("solver.epsilon"), std::string::npos);
    EXPECT_NE(err2.str().find("line "), std::string::npos);

    std::ostringstream err3;
    EXPECT_EQ(cli_run(dir.write("broken.json", "{\n  \"instance\": {\n  ,\n}"), out, err3), 1);
    EXPECT_NE(err3.str().find("line 3"), std::string::npos) << err3.str();

    EXPECT_EQ(cli_run(dir.file("missing.json"), out, err), 1);
}

TEST(CliRun, BaselinesRun) {
    TempDir dir;
    for (const char *alg : {"CG", "CGS"}) {
        json cfg = json::parse(kSpectrahedronRun);
        cfg["algorithm"] = alg;
        cfg["solver"] = {{"epsilon", 0.01}};
        cfg["outputs"] = {{"summary_json", dir.file("s.json")}};
        std::ostringstream out, err;
        ASSERT_EQ(cli_run(dir.write("c.json", cfg.dump()), out, err), 0) << err.str();
        const json s = json::parse(slurp(dir.file("s.json")));
        EXPECT_TRUE(s.contains("wolfe_gap"));
        EXPECT_FALSE(s.contains("bound_checks"));
        EXPECT_LE(s["wolfe_gap"].get<double>(), 0.01);
    }
}

TEST(CliRun, ByteReproducibleApartFromTiming) {
    TempDir dir;
    auto once = [&](const std::string &tag) {
        json cfg = json::parse(kSpectrahedronRun);
        cfg["outputs"] = {{"trace_csv", dir.file(tag + ".csv")}, {"summary_json", dir.file(tag + ".json")}};
        std::ostringstream out, err;
        EXPECT_EQ(cli_run(dir.write(tag + "_cfg.json", cfg.dump()), out, err), 0);
        json s = json::parse(slurp(dir.file(tag + ".json")));
        s.erase("elapsed_seconds");
        return std::pair{without_timing(slurp(dir.file(tag + ".csv"))), s.dump()};
    };
    const auto a = once("a");
    const auto b = once("b");
    EXPECT_EQ(a.first, b.first);
    EXPECT_EQ(a.second, b.second);
}

// ---- cli_bench ------------------------------------------------------------

TEST(CliBench, UnknownAlgorithmRowErrorsOthersComplete) {
    TempDir dir;
    json suite = {{"runs",
                   {{{"instance", {{"family", "SIMPLEX"}, {"m", 10}, {"n", 5}, {"seed", 1}}}, {"algorithm", "CG"}},
                    {{"instance", {{"family", "SIMPLEX"}, {"m", 10}, {"n", 5}, {"seed", 1}}}, {"algorithm", "XYZ"}},
                    {{"instance", {{"family", "SIMPLEX"}, {"m", 10}, {"n", 5}, {"seed", 1}}},
                     {"algorithm", "CGSLS"}}}},
                  {"outputs", {{"aggregate_csv", dir.file("agg.csv")}, {"report_json", dir.file("rep.json")}}}};
    std::ostringstream out, err;
    EXPECT_EQ(cli_bench(dir.write("suite.json", suite.dump(2)), 1, out, err), 2);
    EXPECT_NE(err.str().find("runs[1].algorithm"), std::string::npos) << err.str();
    const json rep = json::parse(slurp(dir.file("rep.json")));
    EXPECT_EQ(rep["runs"][0]["status"], "ok");
    EXPECT_EQ(rep["runs"][1]["status"], "error");
    EXPECT_EQ(rep["runs"][2]["status"], "ok");
    EXPECT_EQ(lines(slurp(dir.file("agg.csv"))).size(), 2u);
}

TEST(CliBench, ParallelMatchesSerial) {
    TempDir dir;
    json suite = json::parse(slurp(std::string(FW_CONFIG_DIR) + "/smoke_suite.json"));
    auto run_with = [&](int p) {
        suite["outputs"] = {{"aggregate_csv", dir.file("agg" + std::to_string(p) + ".csv")}};
        std::ostringstream out, err;
        EXPECT_EQ(cli_bench(dir.write("s.json", suite.dump()), p, out, err), 0) << err.str();
        // drop every *_time column
        std::string kept;
        for (const auto &l : lines(slurp(dir.file("agg" + std::to_string(p) + ".csv")))) {
            std::stringstream ss(l);
            int col = 0;
            for (std::string c; std::getline(ss, c, ','); ++col) {
                if (col >= 5 && (col - 5) % 5 == 3) continue;
                kept += c + ",";
            }
            kept += "\n";
        }
        return kept;
    };
    const std::string serial = run_with(1);
    EXPECT_EQ(serial, run_with(4));
    EXPECT_EQ(lines(serial).size(), 4u);  // header + 3 instances
}

TEST(CliBench, ComparisonsAreEvaluated) {
    TempDir dir;
    const json inst = {{"family", "SIMPLEX"}, {"m", 20}, {"n", 10}, {"seed", 3}};
    json suite = {{"runs", {{{"instance", inst}, {"algorithm", "CG"}}, {{"instance", inst}, {"algorithm", "CGSLS"}}}},
                  {"comparisons", {"CGSLS.outer_iters > CG.outer_iters", "CG.grad_evals == CG.inner_lmo"}},
                  {"outputs", {{"report_json", dir.file("rep.json")}, {"aggregate_csv", dir.file("a.csv")}}}};
    std::ostringstream out, err;
    cli_bench(dir.write("suite.json", suite.dump()), 1, out, err);
    const json rep = json::parse(slurp(dir.file("rep.json")));
    ASSERT_EQ(rep["comparisons"].size(), 2u);
    EXPECT_EQ(rep["comparisons"][1]["result"], "pass");

    suite["comparisons"] = {"CG.iters < 3"};
    std::ostringstream err2;
    EXPECT_EQ(cli_bench(dir.write("bad.json", suite.dump(2)), 1, out, err2), 1);
    EXPECT_NE(err2.str().find("comparisons[0]"), std::string::npos);
}

// ---- demo and oracle gate -------------------------------------------------

TEST(CliDemo, PrintsTrajectory) {
    std::ostringstream out, err;
    ASSERT_EQ(cli_demo_segment(out, err), 0) << err.str();
    const auto ls = lines(out.str());
    ASSERT_EQ(ls.size(), 4u);
    EXPECT_NE(ls[3].find("vertex = (1, 0)"), std::string::npos);
    EXPECT_NE(ls[3].find("y3 = (0.66666666666666674, 0.33333333333333331)"), std::string::npos) << ls[3];
    std::ostringstream again, err2;
    cli_demo_segment(again, err2);
    EXPECT_EQ(out.str(), again.str());
}

TEST(CliLmoCheck, RangesAndFamilies) {
    std::ostringstream out, err;
    EXPECT_EQ(cli_lmo_check("simplex", 6, 100, 1, out, err), 0);
    EXPECT_EQ(cli_lmo_check("spectrahedron", 3, 100, 1, out, err), 0);
    EXPECT_EQ(cli_lmo_check("hamiltonian", 8, 50, 1, out, err), 0);
    EXPECT_EQ(cli_lmo_check("hamiltonian", 40, 1, 1, out, err), 1);
    EXPECT_EQ(cli_lmo_check("cube", 3, 1, 1, out, err), 1);
    EXPECT_EQ(cli_lmo_check("simplex", 3, 0, 1, out, err), 1);
}
