#pragma once

// Shared fixtures and independent numerical oracles for the test suite.
//
// The long-double adaptive Simpson integrator below is deliberately separate
// from the library's own Gauss-Kronrod engine: tests that validate special
// functions or closed-form terms against their defining integrals should not
// depend on the code under test for the reference value.

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "cogrelay/scenario.hpp"

namespace testutil {

// Reference network used throughout the suite: two relays, 20 dB primary
// transmit power, 15 dB peak cap, 10% primary outage allowance.  The peak cap
// binds for both secondary powers, so p_st = p_sr = 10^1.5.
inline cogrelay::ScenarioParams baseline_params() {
    cogrelay::ScenarioParams p;
    p.omega_pt_pd = 1.0;
    p.omega_st_pd = 0.5;
    p.omega_sr_pd = 0.5;
    p.omega_st_sd = 1.5;
    p.omega_pt_sd = 0.5;
    p.omega_st_sr = 1.0;
    p.omega_pt_sr = 0.5;
    p.omega_sr_sd = 1.0;
    p.p_pt = 100.0;                  // 20 dB
    p.p_pk = std::pow(10.0, 1.5);    // 15 dB
    p.n0 = 1.0;
    p.r_p = 0.4;
    p.r_s = 0.1;
    p.lambda_p = 0.1;
    p.n_relays = 2;
    return p;
}

// The same network serialized in scenario-file syntax.
inline std::string baseline_text() {
    return "omega_pt_pd = 1.0\n"
           "omega_st_pd = 0.5\n"
           "omega_sr_pd = 0.5\n"
           "omega_st_sd = 1.5\n"
           "omega_pt_sd = 0.5\n"
           "omega_st_sr = 1.0\n"
           "omega_pt_sr = 0.5\n"
           "omega_sr_sd = 1.0\n"
           "p_pt_db = 20\n"
           "p_pk_db = 15\n"
           "n0 = 1.0\n"
           "r_p = 0.4\n"
           "r_s = 0.1\n"
           "lambda_p = 0.1\n"
           "n_relays = 2\n";
}

// Recursive adaptive Simpson in long double.  Good to ~1e-15 relative on the
// smooth integrands used here; depth-limited so a pathological call fails
// loudly instead of hanging.
inline long double simpson_segment(const std::function<long double(long double)>& f,
                                   long double a, long double b,
                                   long double fa, long double fm, long double fb) {
    return (b - a) / 6.0L * (fa + 4.0L * fm + fb);
}

inline long double simpson_recurse(const std::function<long double(long double)>& f,
                                   long double a, long double b,
                                   long double fa, long double fm, long double fb,
                                   long double whole, long double tol, int depth) {
    const long double m = 0.5L * (a + b);
    const long double lm = 0.5L * (a + m);
    const long double rm = 0.5L * (m + b);
    const long double flm = f(lm);
    const long double frm = f(rm);
    const long double left = simpson_segment(f, a, m, fa, flm, fm);
    const long double right = simpson_segment(f, m, b, fm, frm, fb);
    const long double delta = left + right - whole;
    // Accept on tolerance, on exhausted depth, or when the refinement delta
    // is already at the rounding noise of the panel values themselves:
    // splitting further can then only chase noise, never converge.
    const long double noise =
        200.0L * std::numeric_limits<long double>::epsilon() *
        (fabsl(left) + fabsl(right));
    if (depth <= 0 || fabsl(delta) <= 15.0L * tol || fabsl(delta) <= noise) {
        return left + right + delta / 15.0L;
    }
    return simpson_recurse(f, a, m, fa, flm, fm, left, tol / 2.0L, depth - 1) +
           simpson_recurse(f, m, b, fm, frm, fb, right, tol / 2.0L, depth - 1);
}

inline long double integrate_ld(const std::function<long double(long double)>& f,
                                long double a, long double b,
                                long double tol = 1e-15L, int depth = 40) {
    if (a == b) return 0.0L;
    const long double m = 0.5L * (a + b);
    const long double fa = f(a);
    const long double fm = f(m);
    const long double fb = f(b);
    const long double whole = simpson_segment(f, a, b, fa, fm, fb);
    // Scale the absolute tolerance to the crude first estimate so wildly
    // different magnitudes get comparable relative accuracy.
    long double scale = fabsl(whole);
    if (scale < 1e-300L) scale = 1e-300L;
    return simpson_recurse(f, a, b, fa, fm, fb, whole, tol * scale, depth);
}

// Reference E1 via the substitution t = x e^v, which flattens the 1/t
// boundary layer: E1(x) = integral_0^inf exp(-x e^v) dv with an O(1) smooth
// integrand regardless of how small x is.
inline long double e1_integral_ld(long double x) {
    if (x >= 11000.0L) return expl(-x);  // underflows to 0 like the function
    const long double vmax = logl(1.0L + 11000.0L / x);
    return integrate_ld([x](long double v) { return expl(-x * expl(v)); }, 0.0L, vmax);
}

// Relative difference with a floor so comparisons against values near zero
// degrade to absolute differences instead of dividing by ~0.
inline double rel_diff(double got, double want, double floor = 1e-300) {
    double denom = std::fabs(want);
    if (denom < floor) denom = floor;
    return std::fabs(got - want) / denom;
}

}  // namespace testutil
