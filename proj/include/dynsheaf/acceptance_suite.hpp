#pragma once

#include <string>
#include <vector>

namespace dynsheaf {

struct CheckItem {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Named verification suites over built-in maps. "core" runs the full
/// criteria battery except the Lattes instance; "lattes" runs that one;
/// "all" runs both.
std::vector<CheckItem> run_suite(const std::string& name);
bool suite_exists(const std::string& name);
std::vector<std::string> suite_names();

} // namespace dynsheaf
