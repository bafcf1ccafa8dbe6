#include "kirby/cli.hpp"
#include "kirby/error.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace kirby;

namespace {

struct Run
{
    int code = 0;
    std::string out;
    std::string err;
};

Run cli(const std::vector<std::string>& args)
{
    std::ostringstream out;
    std::ostringstream err;
    Run r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string temp_file(const std::string& name, const std::string& text)
{
    const auto path = std::filesystem::temp_directory_path() / ("kirby_test_" + name);
    std::ofstream(path) << text;
    return path.string();
}

}  // namespace

TEST_CASE("n ranges")
{
    CHECK(parse_n_range("7").lo == 7);
    CHECK(parse_n_range("2..30").hi == 30);
    CHECK_THROWS_AS((void)parse_n_range("5..2"), Error);
    CHECK_THROWS_AS((void)parse_n_range("x"), Error);
}

TEST_CASE("boundary command")
{
    CHECK(cli({"boundary", "--framings", "-5,-2"}).out.find("L(9,2)") != std::string::npos);
    CHECK(cli({"boundary", "--framings", "-4"}).out.find("L(4,1)") != std::string::npos);
    CHECK(cli({"boundary", "--framings", "-2,-2,-2"}).out.find("L(4,3)") != std::string::npos);
    const Run j = cli({"boundary", "--framings", "-5,-2", "--format", "json"});
    CHECK(nlohmann::json::parse(j.out)["value"] == "-9/2");
    CHECK(cli({"boundary", "--framings", "0,0"}).code == kExitUsage);
    CHECK(cli({"boundary", "--framings", "a"}).code == kExitUsage);
}

TEST_CASE("verify command exit codes")
{
    CHECK(cli({"verify", "A", "--n", "2..6"}).code == kExitOk);
    const Run b = cli({"verify", "B", "--n", "4..7"});
    CHECK(b.code == kExitOk);
    CHECK(b.out.find("even endpoint") != std::string::npos);
    CHECK(b.out.find("odd endpoint") != std::string::npos);
    const Run em = cli({"verify", "simple", "--case", "em", "--n", "5"});
    CHECK(em.code == kExitOk);
    CHECK(em.out.find("not simple") != std::string::npos);
    CHECK(cli({"verify", "em", "--n", "3", "--m", "2"}).code == kExitOk);
    CHECK(cli({"verify", "B", "--n", "3"}).code == kExitUsage);
    CHECK(cli({"verify", "Z", "--n", "3"}).code == kExitUsage);
    CHECK(cli({"verify", "A"}).code == kExitUsage);
    CHECK(cli({}).code == kExitUsage);

    const auto out = std::filesystem::temp_directory_path() / "kirby_test_report.json";
    CHECK(cli({"verify", "A", "--n", "3", "--out", out.string()}).code == kExitOk);
    std::ifstream in(out);
    const auto report = nlohmann::json::parse(in);
    CHECK(report["all_pass"] == true);
    CHECK(report["results"][0]["detail"]["steps"].size() > 3);
}

TEST_CASE("run command")
{
    const std::string good = temp_file("good.ks", "manifold V(-3)\nblowup vertex s1\nexpect b2=2 sigma=-2\n");
    const Run ok = cli({"run", good});
    CHECK(ok.code == kExitOk);
    CHECK(nlohmann::json::parse(ok.out)["steps"].size() == 2);

    const std::string syntax = temp_file("syntax.ks", "manifold V(-3)\nblowup\nslide s1 over\n");
    const Run bad = cli({"run", syntax});
    CHECK(bad.code == kExitUsage);
    CHECK(bad.err.find("line 3, col") != std::string::npos);

    const std::string expect = temp_file("expect.ks", "manifold V(-4)\nexpect b2=0\n");
    const Run ex = cli({"run", expect});
    CHECK(ex.code == kExitFailure);
    CHECK(ex.err.find("b2: expected 0, actual 1") != std::string::npos);

    CHECK(cli({"run", "/nonexistent/script.ks"}).code == kExitUsage);
}

TEST_CASE("dot command")
{
    const Run emit = cli({"emit", "A", "--n", "4"});
    REQUIRE(emit.code == kExitOk);
    const std::string path = temp_file("a4.ks", emit.out);
    const Run d = cli({"dot", path, "--step", "3"});
    CHECK(d.code == kExitOk);
    CHECK(d.out.find("digraph plumbing") != std::string::npos);
    CHECK(cli({"dot", path, "--step", "0"}).out == cli({"dot", path, "--step", "0"}).out);
    const Run far = cli({"dot", path, "--step", "9"});
    CHECK(far.code == kExitUsage);
    CHECK(far.err.find("StepOutOfRange") != std::string::npos);
}
