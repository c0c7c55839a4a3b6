#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bosegas {

struct CheckResult {
    int criterion = 0;
    std::string name;
    bool pass = false;
    double measured = 0.0;   // worst measured figure of merit
    double tolerance = 0.0;  // limit it is compared against
    std::string detail;
    double seconds = 0.0;
};

// One entry per acceptance criterion; `which` = 0 runs all, otherwise the
// single criterion with that id.
std::vector<CheckResult> run_acceptance(int which = 0);

// "[PASS] ..." / "[FAIL] ..." lines; returns true if everything passed.
bool print_results(std::ostream& os, const std::vector<CheckResult>& results);

}  // namespace bosegas
