#include "cogrelay/specfun.hpp"

#include "cogrelay/quadrature.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cogrelay::specfun {
namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

void require_positive_finite(double x, const char* name) {
    if (!std::isfinite(x) || x <= 0.0)
        throw std::domain_error(std::string(name) + " must be positive and finite, got " +
                                std::to_string(x));
}

// Convergent series for 0 < x <= 1:
//   E1(x) = -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k k!)
double e1_series(double x) {
    double sum = 0.0;
    double pow_term = 1.0; // x^k / k!
    double sign = 1.0;
    for (int k = 1; k <= 64; ++k) {
        pow_term *= x / k;
        const double term = sign * pow_term / k;
        sum += term;
        sign = -sign;
        if (pow_term / k < 1e-18 * std::abs(sum) + 1e-300) break;
    }
    return -kEulerGamma - std::log(x) + sum;
}

// Continued fraction by the modified Lentz algorithm, x >= 1.  Returns the
// scaled value exp(x) * En(x); the caller multiplies by exp(-x) if wanted.
double en_cf_scaled(int n, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    double b = x + n;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 200; ++i) {
        const double a = -static_cast<double>(i) * (n - 1 + i);
        b += 2.0;
        d = a * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + a / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        h *= delta;
        if (std::abs(delta - 1.0) < eps) break;
    }
    return h;
}

const quad::Options& kernel_quad_options() {
    static const quad::Options opt{1e-13, 0.0, 300};
    return opt;
}

double kernel_integral(const std::function<double(double)>& f, double a, double b) {
    // Best-effort: non-convergence here means the last bits of a smooth
    // kernel, not a wrong value, so the estimate is still returned.
    return quad::integrate(f, a, b, kernel_quad_options()).value;
}

void require_difference_domain(double lo, double hi) {
    require_positive_finite(lo, "lo");
    if (std::isnan(hi) || hi < lo)
        throw std::domain_error("difference endpoints need 0 < lo <= hi, got lo=" +
                                std::to_string(lo) + " hi=" + std::to_string(hi));
}

// Truncating the scaled integrands at u = 60 leaves a relative tail below
// exp(-60) ~ 9e-27 of the total, far under the evaluation tolerance.
constexpr double kScaledTailCut = 60.0;

} // namespace

double exp_integral_e1(double x) {
    require_positive_finite(x, "x");
    if (x < 1.0) return e1_series(x);
    return std::exp(-x) * en_cf_scaled(1, x);
}

double exp_integral_en(int n, double x) {
    if (n < 1) throw std::domain_error("En order must be >= 1, got " + std::to_string(n));
    require_positive_finite(x, "x");
    if (n == 1) return exp_integral_e1(x);
    if (x >= 1.0) return std::exp(-x) * en_cf_scaled(n, x);
    // Upward recurrence E_{k+1} = (exp(-x) - x E_k) / k is stable for x < 1
    // because the x/k magnification factor stays below one.
    const double emx = std::exp(-x);
    double ek = e1_series(x);
    for (int k = 1; k < n; ++k) ek = (emx - x * ek) / k;
    return ek;
}

double upper_gamma_nonpos(int a, double x) {
    if (a > 0) throw std::domain_error("order must be <= 0, got " + std::to_string(a));
    require_positive_finite(x, "x");
    if (a == 0) return exp_integral_e1(x);
    return std::pow(x, a) * exp_integral_en(1 - a, x);
}

double e1_difference(double lo, double hi) {
    require_difference_domain(lo, hi);
    if (lo == hi) return 0.0;
    const bool deep_tail = std::exp(-lo) < 1e-10;
    const bool near_equal = (hi - lo) / lo < 1e-6;
    if (deep_tail || near_equal) {
        const double top = std::min(hi, lo + kScaledTailCut);
        return kernel_integral([](double t) { return std::exp(-t) / t; }, lo, top);
    }
    const double e1_hi = std::isinf(hi) ? 0.0 : exp_integral_e1(hi);
    return exp_integral_e1(lo) - e1_hi;
}

double e1_difference_scaled(double lo, double hi) {
    require_difference_domain(lo, hi);
    if (lo == hi) return 0.0;
    const double top = std::min(hi - lo, kScaledTailCut);
    return kernel_integral([lo](double u) { return std::exp(-u) / (lo + u); }, 0.0, top);
}

double gamma_difference_nonpos(int a, double lo, double hi) {
    if (a > 0) throw std::domain_error("order must be <= 0, got " + std::to_string(a));
    require_difference_domain(lo, hi);
    if (a == 0) return e1_difference(lo, hi);
    if (lo == hi) return 0.0;
    const bool deep_tail = std::exp(-lo) < 1e-10;
    const bool near_equal = (hi - lo) / lo < 1e-6;
    if (deep_tail || near_equal) {
        const double top = std::min(hi, lo + kScaledTailCut);
        return kernel_integral([a](double t) { return std::pow(t, a - 1) * std::exp(-t); },
                               lo, top);
    }
    const double g_hi = std::isinf(hi) ? 0.0 : upper_gamma_nonpos(a, hi);
    return upper_gamma_nonpos(a, lo) - g_hi;
}

double gamma_difference_nonpos_scaled(int a, double lo, double hi) {
    if (a > 0) throw std::domain_error("order must be <= 0, got " + std::to_string(a));
    require_difference_domain(lo, hi);
    if (lo == hi) return 0.0;
    if (a == 0) return e1_difference_scaled(lo, hi);
    const double top = std::min(hi - lo, kScaledTailCut);
    return kernel_integral(
        [a, lo](double u) { return std::pow(lo + u, a - 1) * std::exp(-u); }, 0.0, top);
}

} // namespace cogrelay::specfun
