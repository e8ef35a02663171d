// Acceptance battery: one line per criterion check, nonzero exit on failure.
#include "dynsheaf/acceptance_suite.hpp"

#include <cstdio>

int main() {
    auto results = dynsheaf::run_suite("all");
    bool all = true;
    for (auto& r : results) {
        std::printf("%s %s%s%s\n", r.pass ? "[pass]" : "[FAIL]", r.name.c_str(),
                    r.detail.empty() ? "" : " -- ", r.detail.c_str());
        all = all && r.pass;
    }
    std::printf("%s (%zu checks)\n", all ? "acceptance passed" : "acceptance FAILED",
                results.size());
    return all ? 0 : 1;
}
