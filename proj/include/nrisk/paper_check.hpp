#pragma once

// Regression harness over the published worked examples (LANL fair weather,
// RCCS thunderstorm, ORNL/Titan soft-error rates) and headline catalog values.

#include <string>
#include <vector>

#include "nrisk/site_catalog.hpp"

namespace nrisk {

struct CheckResult {
    std::string check;
    double expected = 0.0;
    double computed = 0.0;
    double tolerance = 0.0;  // absolute
    bool pass = false;
    std::string error;  // set when the computation itself failed
};

std::vector<CheckResult> run_paper_checks(const SiteCatalog& catalog);

}  // namespace nrisk
