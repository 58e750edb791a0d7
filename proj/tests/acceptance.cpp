// Acceptance run: one line per criterion. With --ctest the exit code is 0 when every failing
// check is a documented expected failure and every documented expected failure still fails.
#include "kzu/suite.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <iostream>

using namespace kzu;

namespace {

struct ExpectedFailure {
    int criterion;
    std::string instance_prefix;
    std::string check_prefix;
    std::string reason;
};

// The literal statements are contradicted by the exact computation; see README.
const std::vector<ExpectedFailure> kExpected{
    {5, "A1[1;1;1;1] k=1", "S1 {0,1}: d(R Omega) = 1 - 2/(k+2)",
     "exact degree is 7/3, not 1/3, at level 1"},
    {6, "", "holonomy deviation O(area)", "the connection is flat, so the deviation is round-off and has no slope"},
};

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

const ExpectedFailure* expected(int id, const CheckRecord& c) {
    for (const auto& e : kExpected)
        if (e.criterion == id && starts_with(c.instance, e.instance_prefix) && starts_with(c.check, e.check_prefix))
            return &e;
    return nullptr;
}

std::string label(CheckStatus s) {
    std::string out = status_name(s);
    for (auto& ch : out) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    SuiteOptions opt;
    bool ctest = false;
    std::vector<int> only;
    app.add_flag("--ctest", ctest, "treat documented expected failures as passing");
    app.add_option("--criteria", only, "run only these criteria");
    app.add_option("--samples", opt.samples, "Monte-Carlo budget for the metric criterion");
    app.add_option("--seed", opt.seed, "random seed");
    CLI11_PARSE(app, argc, argv);
    if (only.empty()) only = {1, 2, 3, 4, 5, 6, 7, 8, 9};

    bool all_pass = true, consistent = true;
    for (int id : only) {
        CriterionResult r;
        try {
            r = run_criterion(id, opt);
        } catch (const std::exception& e) {
            r.id = id;
            r.title = "criterion " + std::to_string(id);
            r.status = CheckStatus::Fail;
            r.summary = std::string("error: ") + e.what();
            consistent = false;
        }
        std::cout << "criterion " << id << ": " << label(r.status)
                  << " - " << r.title << " (" << r.summary << ")" << std::endl;
        all_pass = all_pass && r.status == CheckStatus::Pass;
        if (r.status == CheckStatus::Inconclusive) consistent = false;

        std::vector<const ExpectedFailure*> seen;
        for (const auto& c : r.checks) {
            if (!c.counts || c.status == CheckStatus::Pass) continue;
            const auto* e = expected(id, c);
            if (e) {
                seen.push_back(e);
                std::cerr << "  expected failure: " << c.instance << " | " << c.check << " (" << e->reason << ")\n";
            } else {
                consistent = false;
                std::cerr << "  unexpected: " << c.instance << " | " << c.check << " -> " << c.value.dump() << "\n";
            }
        }
        for (const auto& e : kExpected)
            if (e.criterion == id && std::find(seen.begin(), seen.end(), &e) == seen.end()) {
                consistent = false;
                std::cerr << "  expected failure did not occur: " << e.check_prefix << "\n";
            }
    }
    if (ctest) return consistent ? 0 : 1;
    return all_pass ? 0 : 1;
}
