#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

using json = nlohmann::json;

namespace {

struct Run {
    int rc = -1;
    std::string out;
};

Run cli(const std::string& args)
{
    const char* exe = std::getenv("TM_CLI");
    REQUIRE(exe != nullptr);
    const std::string cmd = std::string(exe) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0)
        r.out.append(buf.data(), n);
    const int st = pclose(p);
    r.rc = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

json report(const std::string& args, int want_rc = 0)
{
    const Run r = cli(args);
    CAPTURE(args);
    CHECK(r.rc == want_rc);
    return json::parse(r.out);
}

}  // namespace

TEST_CASE("exit codes")
{
    const auto hd = report("hd-check --q 13 --a 3");
    CHECK(hd["schema"] == "tm/1");
    CHECK(hd["pass"] == true);
    CHECK(hd["max_abs_residual"].get<double>() <= 1e-9);

    const auto cl = report("classify --triple 1,2,-5");
    CHECK(cl["results"]["class"] == "sulfatic");

    CHECK(cli("moment --q 4 --triple 1,1,1").rc == 2);
    CHECK(cli("suite nonsense").rc == 2);
    CHECK(cli("ksum --q 13 --triple 1,1,1").rc == 2);  // --u missing
    CHECK(cli("afe-check --q 13 --t 4 --triple 1,2,-3").rc == 2);  // non-generic
    CHECK(cli("--format xml classify --triple 1,1,1").rc == 2);
    // a tolerance below the rounding level turns a pass into a residual failure
    CHECK(cli("ksum --q 31 --triple 1,2,-5 --u 3 --tol 1e-30").rc == 1);
}

TEST_CASE("report echoes the resolved configuration")
{
    const auto r = report("moment --q 13 --triple 1,1,-3 --xi 12");
    const auto& c = r["command"]["config"];
    CHECK(r["command"]["name"] == "moment");
    CHECK(c["q"] == "13");
    CHECK(c["xi"] == "12");
    CHECK(c["delta"] == "0.25");
    CHECK(c["tol"].get<double>() == 1e-5);
    CHECK(r.contains("wall_ms"));
    const auto& res = r["results"];
    CHECK(std::abs(res["M"].get<double>() - (res["Me"].get<double>() + res["Mo"].get<double>()) / 2) <
          1e-12);
    CHECK(res["residuals"]["afe_e"].get<double>() <= 1e-5);
    CHECK(res["D"].get<double>() > 5.9);
}

TEST_CASE("csv output")
{
    const Run k = cli("ktable --q 13 --triple 1,1,1 --csv");
    CHECK(k.rc == 0);
    CHECK(k.out.rfind("u,re,im\n1,", 0) == 0);
    int lines = 0;
    for (char ch : k.out)
        lines += ch == '\n';
    CHECK(lines == 13);

    const Run s = cli("--format csv conjp-scan --q 101 --triples 2,2,-3 1,1,3 --dmax 2");
    CHECK(s.rc == 0);
    CHECK(s.out.rfind("q,a,b,c,d,L,M,N,count,ratio", 0) == 0);
}

TEST_CASE("worker count does not change results")
{
    auto one = report("--workers 1 count-box --q 211 --triple 1,1,-3 --L 16 --M 16 --N 8");
    auto four = report("--workers 4 count-box --q 211 --triple 1,1,-3 --L 16 --M 16 --N 8");
    CHECK(one["results"] == four["results"]);
    auto c1 = report("--workers 1 converge --triple 1,1,1 --pmin 101 --pmax 160");
    auto c3 = report("--workers 3 converge --triple 1,1,1 --pmin 101 --pmax 160");
    CHECK(c1["results"].dump() == c3["results"].dump());
}

TEST_CASE("dlog cache")
{
    const auto dir = std::filesystem::temp_directory_path() / "tmq_cli_cache_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const auto a = report("field-info --q 1009 --cache-dir " + dir.string());
    CHECK(std::filesystem::exists(dir / "tmq_1009.bin"));
    const auto b = report("field-info --q 1009 --cache-dir " + dir.string());
    CHECK(a["results"] == b["results"]);
    CHECK(a["results"]["g"] == 11);
    std::filesystem::remove_all(dir);
}

TEST_CASE("suites and lists")
{
    const auto r = report("suite lists");
    CHECK(r["pass"] == true);
    CHECK(r["results"]["items"][0]["id"] == 5);
    const auto e = report("enumerate --n 4 --parity even --nonzero-gap");
    CHECK(e["results"]["sporadic"].size() == 6);
    const auto d = report("dseries --triple 1,1,-3");
    CHECK(std::abs(d["results"]["value"].get<double>() - 5.928074) < 1e-6);
}
