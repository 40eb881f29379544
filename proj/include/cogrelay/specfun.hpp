#pragma once

namespace cogrelay::specfun {

// Exponential integral E1(x) = integral_x^inf exp(-t)/t dt, x > 0.
// Power series below x = 1, modified-Lentz continued fraction above.
// Underflows to 0 for large x. Throws std::domain_error for x <= 0 or
// non-finite x.
double exp_integral_e1(double x);

// Generalised exponential integral En(x) = integral_1^inf exp(-x t) t^-n dt,
// n >= 1, x > 0. Continued fraction for x >= 1; upward recurrence
// E_{k+1}(x) = (exp(-x) - x E_k(x)) / k from the E1 series for x < 1.
double exp_integral_en(int n, double x);

// Upper incomplete gamma for non-positive integer order a <= 0, x > 0,
// evaluated through the bridge Gamma(a, x) = x^a E_{1-a}(x).
double upper_gamma_nonpos(int a, double x);

// E1(lo) - E1(hi) for 0 < lo <= hi, guarded against catastrophic
// cancellation: when the operands are tiny or nearly equal the difference is
// evaluated as integral_lo^hi exp(-t)/t dt by adaptive quadrature.
double e1_difference(double lo, double hi);

// exp(lo) * (E1(lo) - E1(hi)): the exponentially scaled difference, finite
// even where exp(lo) alone would overflow.  Evaluated as
// integral_0^{hi-lo} exp(-u)/(lo+u) du.
double e1_difference_scaled(double lo, double hi);

// Gamma(a, lo) - Gamma(a, hi) for integer a <= 0, 0 < lo <= hi, with the
// same cancellation guards as e1_difference.
double gamma_difference_nonpos(int a, double lo, double hi);

// exp(lo) * (Gamma(a, lo) - Gamma(a, hi)), evaluated as
// integral_0^{hi-lo} (lo+u)^{a-1} exp(-u) du.
double gamma_difference_nonpos_scaled(int a, double lo, double hi);

} // namespace cogrelay::specfun
