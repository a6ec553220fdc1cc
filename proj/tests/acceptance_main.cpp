// Runs the twelve acceptance criteria and prints one line per criterion.
// Usage: acceptance [--out DIR] [ID...]
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "tmq/error.hpp"
#include "tmq/suites.hpp"

int main(int argc, char** argv)
{
    std::string out = ".";
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--out" && i + 1 < argc)
            out = argv[++i];
        else
            ids.push_back(std::atoi(a.c_str()));
    }
    if (ids.empty())
        for (int i = 1; i <= 12; ++i)
            ids.push_back(i);

    int failed = 0;
    std::vector<std::pair<std::string, std::string>> csv;
    for (int id : ids) {
        try {
            const auto c = tmq::run_criterion(id, {}, &csv);
            std::printf("%s\n", tmq::format_line(c).c_str());
            failed += !c.pass;
        } catch (const std::exception& e) {
            std::printf("FAIL %2d error: %s\n", id, e.what());
            ++failed;
        }
        std::fflush(stdout);
    }
    for (const auto& [name, body] : csv) {
        std::ofstream f(out + "/" + name);
        f << body;
        std::printf("wrote %s/%s\n", out.c_str(), name.c_str());
    }
    std::printf("%zu criteria, %d failed\n", ids.size(), failed);
    return failed ? 1 : 0;
}
