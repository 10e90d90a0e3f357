// Acceptance run: one line per criterion, nonzero exit if any fails.
// Pass a directory as the first argument to also write each suite's JSON.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "toda/verify.hpp"

using namespace toda;

namespace {

struct Criterion {
    int id;
    const char* suite;
    const char* what;
    double limit_seconds;
};

}  // namespace

int main(int argc, char** argv) {
    const std::string dump_dir = argc > 1 ? argv[1] : "";
    const Criterion criteria[] = {
        {1, "duality", "duality equations, special cases and round trips", 1.0},
        {2, "homology", "cubical fixtures exact, sampled agrees", 120.0},
        {3, "join", "join Betti numbers match the projection below p", 300.0},
        {4, "end2end", "decisions match brute force on 30 sentences", 900.0},
        {5, "fidelity", "join templates match direct evaluation, variable counts", 0.0},
        {6, "shell", "shell normalization matches normalized evaluation", 0.0},
        {7, "sizes", "size growth slope <= 3, variable recurrence", 0.0},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const SuiteResult r = run_suite(c.suite);
        const bool in_time = c.limit_seconds <= 0 || r.seconds < c.limit_seconds;
        const bool ok = r.pass() && in_time;
        failed += ok ? 0 : 1;
        char line[256];
        std::snprintf(line, sizeof line, "criterion %d [%s] %s: %zu/%zu cases, %.2f s", c.id, ok ? "PASS" : "FAIL", c.what,
                      r.passed(), r.cases.size(), r.seconds);
        std::cout << line;
        if (c.limit_seconds > 0) std::cout << " (limit " << c.limit_seconds << " s)";
        std::cout << "\n";
        for (const auto& cs : r.cases)
            if (!cs.pass) std::cout << "    failed: " << cs.name << " " << cs.detail.dump() << "\n";
        if (!dump_dir.empty()) std::ofstream(dump_dir + "/" + c.suite + ".json") << r.to_json().dump(2) << "\n";
    }
    std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria failed") << "\n";
    return failed == 0 ? 0 : 1;
}
