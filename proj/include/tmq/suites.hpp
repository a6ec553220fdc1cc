#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tmq/boxcount.hpp"
#include "tmq/parallel.hpp"
#include "tmq/triples.hpp"

namespace tmq {

struct CriterionOutcome {
    int id = 0;              // 1..12 for the acceptance grid, 0 for extra checks
    std::string name;
    bool pass = false;
    double measured = 0;     // the quantity compared against tol
    double tol = 0;
    double seconds = 0;
    std::string detail;
};

struct SuiteOptions {
    const Workers* workers = nullptr;  // null means serial
    u64 budget = default_work_budget;
};

struct SuiteOutcome {
    std::string name;
    std::vector<CriterionOutcome> items;
    std::vector<std::pair<std::string, std::string>> csv;  // file name, contents
    bool pass() const;
};

// The (a,b,+-c) list shared by several criteria.
const std::vector<TripleSpec>& acceptance_triples();

// One acceptance criterion, 1..12. CSV artifacts go to `csv` when given.
CriterionOutcome run_criterion(int id, const SuiteOptions& opt = {},
                               std::vector<std::pair<std::string, std::string>>* csv = nullptr);

// acceptance (all twelve), identities, lists, scan. Throws UnknownSuite.
SuiteOutcome run_suite(const std::string& name, const SuiteOptions& opt = {});
std::vector<std::string> suite_names();

// "PASS  3 spectral-vs-naive  max 2.1e-13 <= 1e-09  (0.8 s)  ..."
std::string format_line(const CriterionOutcome& c);

}  // namespace tmq
