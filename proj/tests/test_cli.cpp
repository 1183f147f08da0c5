#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hartogs/cli.hpp"

using nlohmann::json;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = hartogs::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

json parse_out(const RunResult& r) { return json::parse(r.out); }

// collect all numbers in document order for field-by-field comparison
void collect_numbers(const json& j, std::vector<double>& into) {
    if (j.is_number()) into.push_back(j.get<double>());
    else if (j.is_object())
        for (const auto& [key, value] : j.items()) collect_numbers(value, into);
    else if (j.is_array())
        for (const auto& value : j) collect_numbers(value, into);
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& content)
        : path("/tmp/balanced_lab_test_" + name) {
        std::ofstream f(path);
        f << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("balanced verdict through the CLI") {
    const RunResult r = run_cli({"balanced", "--profile", "hyperbolic", "--n", "2", "--m", "4"});
    REQUIRE(r.exit_code == 0);
    const json j = parse_out(r);
    CHECK(j.at("schema") == "balanced-lab/1");
    CHECK(j.at("verdict").at("verdict") == "balanced");
    CHECK(std::abs(j.at("verdict").at("constant_estimate").get<double>() - 0.6079271018540267) <
          1e-8);

    const RunResult trivial =
        run_cli({"balanced", "--profile", "hyperbolic", "--n", "2", "--m", "2"});
    REQUIRE(trivial.exit_code == 0);
    const json jt = parse_out(trivial);
    CHECK(jt.at("verdict").at("verdict") == "not_balanced");
    CHECK(jt.at("verdict").at("reason").get<std::string>().find("trivial-space") !=
          std::string::npos);
}

TEST_CASE("gamma estimation through the CLI") {
    const RunResult r = run_cli({"gamma", "--profile", "springer", "--m-set", "2,3,4",
                                 "--t-grid", "0.25,0.5,1"});
    REQUIRE(r.exit_code == 0);
    const json j = parse_out(r);
    CHECK(std::abs(j.at("gamma_hat").get<double>() - 1.0) < 1e-4);
    CHECK(j.at("residual").get<double>() < 1e-6);
    CHECK(j.at("probes").size() == 9);
}

TEST_CASE("moments emit csv by default") {
    const RunResult r =
        run_cli({"moments", "--profile", "springer", "--k-max", "3", "--m", "1"});
    REQUIRE(r.exit_code == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "k,c_k,err");
    std::getline(lines, line);
    CHECK(line.rfind("0,", 0) == 0);
    int rows = 1;
    while (std::getline(lines, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 4);
}

TEST_CASE("exit codes") {
    CHECK(run_cli({"balanced", "--profile", "nosuch", "--n", "2", "--m", "4"}).exit_code == 2);
    CHECK(run_cli({"frobnicate"}).exit_code == 2);
    CHECK(run_cli({"balanced", "--no-such-flag"}).exit_code == 2);
    CHECK(run_cli({"moments", "--profile", "hyperbolic", "--m", "1", "--k-max", "2"}).exit_code ==
          3);
    CHECK(run_cli({"epsilon", "--profile", "hyperbolic", "--at", "0.9,0.9", "--m",
                   "4"}).exit_code == 2);
    CHECK(run_cli({"epsilon", "--profile", "hyperbolic", "--at", "0.1,frog", "--m",
                   "4"}).exit_code == 2);
    CHECK(run_cli({"epsilon", "--profile", "hyperbolic", "--at", "0.1,0.1", "--n", "3", "--m",
                   "4"}).exit_code == 2);
    CHECK(run_cli({"balanced", "--profile", "hyperbolic", "--profile-expr", "1 - x", "--x0",
                   "1", "--n", "2", "--m", "4"}).exit_code == 2); // two profile sources
    CHECK(run_cli({"check-kahler", "--profile-expr", "1 - x", "--x0", "one"}).exit_code == 2);
    CHECK(run_cli({"balanced", "--profile", "hyperbolic", "--n", "2", "--m", "4", "--tol",
                   "-1e-6"}).exit_code == 2);
    const RunResult usage = run_cli({"frobnicate"});
    CHECK(!usage.err.empty());
    CHECK(usage.out.empty());
}

TEST_CASE("completeness probe through the CLI carries its trace") {
    const RunResult r = run_cli({"check-complete", "--profile", "springer"});
    REQUIRE(r.exit_code == 0);
    const json j = parse_out(r);
    CHECK(j.at("verdict") == "complete");
    CHECK(j.at("trace").size() >= 3);
    CHECK(j.at("partial_integral").get<double>() > 1.0);

    // csv makes no sense here and is refused
    CHECK(run_cli({"check-complete", "--profile", "springer", "--format", "csv"}).exit_code ==
          2);
}

TEST_CASE("failed kahler check still exits zero with pass false") {
    const RunResult r = run_cli({"check-kahler", "--profile-expr", "1 + x", "--x0", "1"});
    REQUIRE(r.exit_code == 0);
    const json j = parse_out(r);
    CHECK(j.at("pass") == false);
    CHECK(j.at("min_G").get<double>() < 0.0);
}

TEST_CASE("quantization scan through the CLI") {
    const RunResult r = run_cli({"quantization-scan", "--profile", "springer", "--n", "2",
                                 "--m-from", "3", "--m-to", "5", "--samples", "40"});
    REQUIRE(r.exit_code == 0);
    const json j = parse_out(r);
    CHECK(j.at("all_balanced") == false);
    REQUIRE(j.at("verdicts").size() == 3);
    for (const auto& v : j.at("verdicts")) CHECK(v.at("verdict") == "not_balanced");

    const RunResult empty = run_cli({"quantization-scan", "--profile", "hyperbolic", "--n", "2",
                                     "--m-from", "5", "--m-to", "4"});
    REQUIRE(empty.exit_code == 0);
    CHECK(parse_out(empty).at("verdicts").empty());
}

TEST_CASE("config files feed defaults and flags override") {
    const TempFile cfg("cfg.json", R"({
        "profile": {"builtin": "springer"},
        "n": 2,
        "m": 4,
        "samples": 50
    })");
    const RunResult from_cfg = run_cli({"balanced", "--config", cfg.path});
    REQUIRE(from_cfg.exit_code == 0);
    const json j = parse_out(from_cfg);
    CHECK(j.at("profile").at("label") == "springer");
    CHECK(j.at("verdict").at("verdict") == "not_balanced");
    CHECK(j.at("sample_count") == 50);

    // flag overrides the config's m
    const RunResult overridden = run_cli({"balanced", "--config", cfg.path, "--m", "5"});
    REQUIRE(overridden.exit_code == 0);
    CHECK(parse_out(overridden).at("m") == 5);

    const TempFile broken("broken.json", "{ not json");
    CHECK(run_cli({"balanced", "--config", broken.path}).exit_code == 2);

    const TempFile badfield("badfield.json", R"({"profile": {"builtin": "x"}, "n": 2, "m": 4})");
    CHECK(run_cli({"balanced", "--config", badfield.path}).exit_code == 2);

    const TempFile exprcfg("expr.json",
                           R"({"profile": {"expr": "1 - x", "x0": 1.0}, "n": 1, "m": 3})");
    const RunResult via_expr = run_cli({"balanced", "--config", exprcfg.path});
    REQUIRE(via_expr.exit_code == 0);
    CHECK(parse_out(via_expr).at("verdict").at("verdict") == "balanced");
}

TEST_CASE("x0 accepts the string inf") {
    const RunResult r = run_cli({"check-kahler", "--profile-expr", "exp(-x)", "--x0", "inf"});
    REQUIRE(r.exit_code == 0);
    CHECK(parse_out(r).at("pass") == true);
}

TEST_CASE("reports are byte-identical across runs") {
    const std::vector<std::string> args = {"balanced", "--profile", "springer", "--n", "2",
                                           "--m",      "4",         "--samples", "64",
                                           "--seed",   "42"};
    const RunResult a = run_cli(args);
    const RunResult b = run_cli(args);
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);

    const RunResult c = run_cli({"curvature", "--profile", "hyperbolic", "--n", "2", "--grid",
                                 "9", "--seed", "3"});
    const RunResult d = run_cli({"curvature", "--profile", "hyperbolic", "--n", "2", "--grid",
                                 "9", "--seed", "3"});
    REQUIRE(c.exit_code == 0);
    CHECK(c.out == d.out);
}

TEST_CASE("registry and expression profiles produce matching numbers") {
    const std::vector<std::string> tail = {"--n", "2", "--m", "4", "--samples", "32",
                                           "--seed", "5"};
    std::vector<std::string> via_builtin = {"balanced", "--profile", "hyperbolic"};
    via_builtin.insert(via_builtin.end(), tail.begin(), tail.end());
    std::vector<std::string> via_expr = {"balanced", "--profile-expr", "1 - x", "--x0", "1"};
    via_expr.insert(via_expr.end(), tail.begin(), tail.end());

    const RunResult a = run_cli(via_builtin);
    const RunResult b = run_cli(via_expr);
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);

    std::vector<double> na, nb;
    collect_numbers(parse_out(a), na);
    collect_numbers(parse_out(b), nb);
    REQUIRE(na.size() == nb.size());
    for (std::size_t i = 0; i < na.size(); ++i)
        CHECK(std::abs(na[i] - nb[i]) <= 1e-10 * std::max(1.0, std::abs(na[i])));
}

TEST_CASE("kernel and epsilon point queries") {
    const RunResult k = run_cli({"kernel", "--profile", "hyperbolic", "--at", "0.5,0.3", "--m",
                                 "4", "--method", "series"});
    REQUIRE(k.exit_code == 0);
    const json jk = parse_out(k);
    const double want = 6.0 / (M_PI * M_PI * std::pow(0.66, 4));
    CHECK(std::abs(jk.at("value").get<double>() - want) < 1e-6 * want);
    CHECK(jk.at("shells").get<int>() > 5);

    const RunResult e = run_cli({"epsilon", "--profile", "springer", "--at", "0.5,0.2", "--m",
                                 "4", "--method", "closed"});
    REQUIRE(e.exit_code == 0);
    const json je = parse_out(e);
    const double w = je.at("sample").at("w").get<double>();
    const double eps = je.at("sample").at("epsilon").get<double>();
    CHECK(std::abs(eps - 2.0 * (3.0 + (1.0 - w)) / (M_PI * M_PI)) < 1e-5);

    // complex components are understood
    const RunResult c = run_cli({"epsilon", "--profile", "hyperbolic", "--at", "0.3+0.2i,0.1i",
                                 "--m", "4", "--method", "closed"});
    REQUIRE(c.exit_code == 0);
    CHECK(std::abs(parse_out(c).at("sample").at("x").get<double>() - 0.13) < 1e-12);
}

TEST_CASE("output goes to a file when asked") {
    const std::string path = "/tmp/balanced_lab_test_report.json";
    std::remove(path.c_str());
    const RunResult r = run_cli({"check-kahler", "--profile", "hyperbolic", "--out", path});
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.empty());
    std::ifstream f(path);
    REQUIRE(f.good());
    json j;
    f >> j;
    CHECK(j.at("pass") == true);
    std::remove(path.c_str());
}
