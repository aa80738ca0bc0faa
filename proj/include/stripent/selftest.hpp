#pragma once

#include <string>
#include <vector>

namespace stripent {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

enum class Fault { None, WrongTransferEntry };

// Exact-oracle invariant suite (no Monte Carlo). The fault knob flips one
// transfer entry before the invariants run, for exercising failure reporting.
std::vector<CheckResult> selftest(Fault fault = Fault::None);

} // namespace stripent
