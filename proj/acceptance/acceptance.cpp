// Runs the ten acceptance criteria and prints one PASS/FAIL line per criterion.
//
// Exit status: 0 when every computed-side identity holds, 1 otherwise.  A
// criterion that fails only because a closed form disagrees with the
// computation prints FAIL with the reason but does not change the status;
// pass --strict to exit 1 on any FAIL.

#include "ahmass/verify.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <iostream>

int main(int argc, char** argv) {
    bool strict = false;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--strict") == 0) strict = true;
    ahmass::SuiteOptions opt;
    if (const char* t = std::getenv("AHMASS_THREADS")) opt.threads = std::max(1, std::atoi(t));
    auto results = ahmass::run_acceptance_suite(opt);
    bool computed = true, all = true;
    for (auto& r : results) {
        std::printf("criterion %2d %s  %s (%.2f s, budget %.0f s)\n", r.id, r.pass ? "PASS" : "FAIL", r.title.c_str(), r.seconds,
                    r.budget);
        for (auto& d : r.details) std::printf("    %s\n", d.c_str());
        computed &= r.computed_ok;
        all &= r.pass;
    }
    int fails = 0;
    for (auto& r : results) fails += !r.pass;
    std::printf("%d/%zu criteria pass; computed-side identities %s\n", static_cast<int>(results.size()) - fails, results.size(),
                computed ? "all hold" : "FAILED");
    if (strict) return all ? 0 : 1;
    return computed ? 0 : 1;
}
