#pragma once
#include <string>
#include <vector>

#include "slitfano/config.hpp"

namespace slitfano {

struct CheckResult {
    std::string name;
    double value = 0.0;     // measured deviation
    double tolerance = 0.0; // after scaling
    bool pass = false;
    std::string error;      // set when the check threw
};

// Cheap identities that hold by construction. Tolerances are multiplied by cfg.tol_scale and
// cfg.tol is passed to the series evaluations.
std::vector<CheckResult> run_selfcheck(const RunConfig& cfg);

} // namespace slitfano
