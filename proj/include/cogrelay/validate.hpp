#pragma once

#include "cogrelay/closed_form.hpp"
#include "cogrelay/mc_sim.hpp"
#include "cogrelay/scenario.hpp"

#include <string>
#include <vector>

namespace cogrelay {

struct ValidationConfig {
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 42;
    int workers = 1;
    double closed_quad_rel_tol = 1e-6;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

// Everything the verdict depends on, separated from the evaluation so the
// comparison logic is testable against injected (e.g. corrupted) values.
struct ValidationInputs {
    double closed_value = 0.0;
    Validity closed_validity = Validity::valid;
    double quad_value = 0.0;
    OutageEstimate mc_secondary;
    OutageEstimate primary_st;
    OutageEstimate primary_sr;
    PowerBudget budget;
    double lambda_p = 0.0;
    double silent_primary_outage = 0.0; // primary outage with both secondaries quiet
    double closed_quad_rel_tol = 1e-6;
};

struct ValidationReport {
    bool passed = false;
    std::vector<CheckResult> checks;
    ValidationInputs inputs;
};

ValidationReport assess_validation(const ValidationInputs& in);

// Cross-validates one scenario: closed form vs quadrature (relative), closed
// form vs Monte Carlo (3 standard errors), and the realised primary outage
// at both transmit powers against the binding they report.
ValidationReport run_validation(const ScenarioParams& p, const ValidationConfig& cfg = {});

} // namespace cogrelay
