#pragma once

#include "cogrelay/scenario.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace cogrelay {

// Exact binomial coefficient in 64-bit arithmetic; n <= 60 keeps every
// intermediate below 2^63.  Throws std::domain_error beyond that.
std::uint64_t binomial(int n, int k);

// Per-n constants of the partial-fraction decomposition.  Notation follows
// the derivation: with A = omega_st_sr p_st, B = omega_sr_sd p_sr,
// C = omega_st_sd p_st, D = omega_pt_sr p_pt, E = omega_pt_sd p_pt,
//   s   = n0 (n/A + n/B - 1/C)
//   mu  = E (n/B - 1/C)
//   pi1 = A / D
//   tau = (E theta_s / C + 1) / mu
//   chi = tau - pi1
// `degenerate` is set when s, mu or chi sits within rounding distance of a
// pole collision (relative tolerance 1e-9) or a constant is non-finite; the
// series form is then numerically meaningless and evaluation falls back to
// quadrature.
struct AuxConstants {
    int n = 0;
    double s = 0.0;
    double mu = 0.0;
    double tau = 0.0;
    double pi1 = 0.0;
    double chi = 0.0;
    bool degenerate = false;
};
AuxConstants aux_constants(const ScenarioParams& p, const PowerBudget& budget, int n);

enum class Validity { valid, outside_validity_region, degenerate_fallback };
std::string_view to_string(Validity v);

// The series derivation requires s_n > 0 and mu_n > 0 for every n = 1..N.
Validity validity_check(const ScenarioParams& p, const PowerBudget& budget);

// Thrown by the term evaluators when a sum cancels catastrophically
// (max |term| exceeds 1e8 x |sum|) or an intermediate is non-finite.
struct NumericalHazard : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// J(k) = integral_0^theta exp(-s z) / ((z+pi1)^k (z+tau)) dz in closed form;
// j21/j22 are the k = n and k = n+1 instances appearing in I2, j3 is the
// second-order-pole variant integral_0^theta exp(-s z)/((z+pi1)^n (z+tau)^2).
double j21(int n, const AuxConstants& aux, double theta_s);
double j22(int n, const AuxConstants& aux, double theta_s);
double j3(int n, const AuxConstants& aux, double theta_s);

// The three pieces of the outage probability: relay-only term I1 and the
// direct-link cross terms I2, I3 (outage with MRC = I1 - I2 - I3).
double term_i1(const ScenarioParams& p, const PowerBudget& budget);
double term_i2(const ScenarioParams& p, const PowerBudget& budget);
double term_i3(const ScenarioParams& p, const PowerBudget& budget);

struct PerRelayTerms {
    int n = 0;
    double j21 = 0.0;
    double j22 = 0.0;
    double j3 = 0.0;
};

struct ClosedFormResult {
    double i1 = 0.0;
    double i2 = 0.0;
    double i3 = 0.0;
    double outage_mrc = 0.0;
    double outage_relay_only = 0.0;
    std::vector<PerRelayTerms> per_n_terms;
    Validity validity = Validity::valid;
};

// End-to-end secondary outage in closed form.  p_st = 0 (silenced secondary)
// yields outage exactly 1.  Outside the validity region outage_mrc is NaN and
// the validity flag is set; I1 (and so the relay-only outage) is still
// computed since it does not involve the partial fractions.  A degenerate or
// catastrophically cancelling evaluation is answered by the quadrature
// engine instead and labelled degenerate_fallback, never silently.
ClosedFormResult secondary_outage_mrc(const ScenarioParams& p);
ClosedFormResult secondary_outage_mrc(const ScenarioParams& p, const PowerBudget& budget);

} // namespace cogrelay
