#pragma once

#include "cogrelay/scenario.hpp"

namespace cogrelay {

enum class OutageMode { mrc_with_direct, relay_only };

struct QuadConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_subdivisions = 2000;
    // Upper limit of the outer integral over the primary->destination
    // interference gain; 0 selects omega_pt_sd * ln(1e16), which bounds the
    // discarded tail mass by 1e-16.
    double y_truncation = 0.0;
};

// Secondary outage by direct numerical integration of the conditional
// outage averaged over the shared primary->destination interference gain.
// Everything downstream of the channel model is integrated as-is: no series
// expansion, no partial fractions, so this is structurally independent of
// the closed form and usable as its oracle.  Non-convergence raises
// quad::NonConvergence, it is never papered over.
double conditional_outage_given_y(const ScenarioParams& p, const PowerBudget& budget,
                                  double y, OutageMode mode, const QuadConfig& cfg = {});

double outage_by_quadrature(const ScenarioParams& p, const PowerBudget& budget,
                            OutageMode mode, const QuadConfig& cfg = {});
double outage_by_quadrature(const ScenarioParams& p, OutageMode mode,
                            const QuadConfig& cfg = {});

} // namespace cogrelay
