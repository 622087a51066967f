#pragma once

#include <string>
#include <vector>

namespace amplicap {

enum class ValidationSuite { Quick, Full };

struct CheckResult {
    std::string name;
    bool passed;
    std::string detail;
};

/// Oracle and property checks against the built library. Quick runs in well
/// under two minutes; Full adds the 2-D grid-oracle comparison of ell and the
/// higher-dimensional estimator checks.
std::vector<CheckResult> run_validation(ValidationSuite suite);

}  // namespace amplicap
