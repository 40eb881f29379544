#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cogrelay/specfun.hpp"
#include "helpers.hpp"

using namespace cogrelay::specfun;
using testutil::integrate_ld;
using testutil::rel_diff;

namespace {

// Defining-integral oracles in long double, independent of the library code.

long double e1_oracle(long double x) { return testutil::e1_integral_ld(x); }

// En(x) = exp(-x) * integral_0^inf exp(-x u) (1+u)^-n du.
long double en_oracle(int n, long double x) {
    long double umax = 90.0L / x;
    long double core = integrate_ld(
        [n, x](long double u) {
            return expl(-x * u) * powl(1.0L + u, (long double)-n);
        },
        0.0L, umax);
    return expl(-x) * core;
}

// Gamma(a, x) = exp(-x) * integral_0^inf (x+u)^(a-1) exp(-u) du for a <= 0.
long double gamma_oracle(int a, long double x) {
    long double core = integrate_ld(
        [a, x](long double u) {
            return powl(x + u, (long double)(a - 1)) * expl(-u);
        },
        0.0L, 90.0L);
    return expl(-x) * core;
}

// E1(lo) - E1(hi) = integral_lo^hi exp(-t)/t dt, evaluated without forming
// the difference.
long double e1_diff_oracle(long double lo, long double hi) {
    return integrate_ld(
        [lo](long double u) { return expl(-(lo + u)) / (lo + u); }, 0.0L, hi - lo);
}

}  // namespace

TEST_CASE("E1 matches frozen reference values") {
    CHECK(exp_integral_e1(1.0) == doctest::Approx(0.21938393439552027).epsilon(1e-14));
    CHECK(exp_integral_e1(0.5) == doctest::Approx(0.55977359477616081).epsilon(1e-14));
    CHECK(exp_integral_e1(2.0) == doctest::Approx(0.04890051070806112).epsilon(1e-14));
}

TEST_CASE("E1 agrees with its defining integral across the argument range") {
    // Straddles the series/continued-fraction switchover at x = 1.
    const double xs[] = {1e-8, 1e-4, 0.01, 0.1,  0.3, 0.7, 0.9, 0.99, 1.0,
                         1.01, 1.1,  1.5,  2.0,  3.0, 5.0, 10.0, 20.0, 50.0,
                         100.0, 300.0, 700.0};
    for (double x : xs) {
        double want = (double)e1_oracle((long double)x);
        CAPTURE(x);
        CHECK(rel_diff(exp_integral_e1(x), want) <= 1e-12);
    }
}

TEST_CASE("E1 basic analytic properties") {
    // Strictly decreasing and positive.
    double prev = exp_integral_e1(1e-6);
    for (double x : {1e-3, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0, 600.0}) {
        double v = exp_integral_e1(x);
        CHECK(v > 0.0);
        CHECK(v < prev);
        prev = v;
    }
    // Classic envelope: exp(-x)/(x+1) < E1(x) < exp(-x)/x.
    for (double x : {0.01, 0.3, 1.0, 4.0, 40.0, 400.0}) {
        double v = exp_integral_e1(x);
        CAPTURE(x);
        CHECK(v > std::exp(-x) / (x + 1.0));
        CHECK(v < std::exp(-x) / x);
    }
    // Graceful underflow rather than an exception for huge arguments.
    CHECK(exp_integral_e1(800.0) == 0.0);
}

TEST_CASE("E1 rejects arguments outside its domain") {
    CHECK_THROWS_AS(exp_integral_e1(0.0), std::domain_error);
    CHECK_THROWS_AS(exp_integral_e1(-1.0), std::domain_error);
    CHECK_THROWS_AS(exp_integral_e1(std::nan("")), std::domain_error);
    CHECK_THROWS_AS(exp_integral_e1(std::numeric_limits<double>::infinity()),
                    std::domain_error);
}

TEST_CASE("En matches frozen value and defining integral") {
    CHECK(exp_integral_en(1, 1.0) == doctest::Approx(0.21938393439552027).epsilon(1e-14));
    CHECK(exp_integral_en(2, 1.0) == doctest::Approx(0.14849550677592205).epsilon(1e-13));
    for (int n : {1, 2, 3, 4, 5, 7}) {
        for (double x : {0.05, 0.3, 0.9, 1.0, 1.5, 5.0, 20.0}) {
            double want = (double)en_oracle(n, (long double)x);
            CAPTURE(n);
            CAPTURE(x);
            CHECK(rel_diff(exp_integral_en(n, x), want) <= 1e-11);
        }
    }
}

TEST_CASE("En decreases in the order for fixed argument") {
    for (double x : {0.2, 1.0, 6.0}) {
        double prev = exp_integral_en(1, x);
        for (int n = 2; n <= 8; ++n) {
            double v = exp_integral_en(n, x);
            CHECK(v > 0.0);
            CHECK(v < prev);
            prev = v;
        }
    }
}

TEST_CASE("En domain errors") {
    CHECK_THROWS_AS(exp_integral_en(0, 1.0), std::domain_error);
    CHECK_THROWS_AS(exp_integral_en(-3, 1.0), std::domain_error);
    CHECK_THROWS_AS(exp_integral_en(2, 0.0), std::domain_error);
    CHECK_THROWS_AS(exp_integral_en(2, -4.0), std::domain_error);
}

TEST_CASE("upper incomplete gamma at non-positive integer order") {
    // Gamma(-1, 1) has a known closed reference; Gamma(0, x) = E1(x).
    CHECK(upper_gamma_nonpos(-1, 1.0) == doctest::Approx(0.14849550677592205).epsilon(1e-13));
    CHECK(upper_gamma_nonpos(-2, 2.0) == doctest::Approx(0.007533344949453973).epsilon(1e-12));
    CHECK(upper_gamma_nonpos(0, 1.5) ==
          doctest::Approx(exp_integral_e1(1.5)).epsilon(1e-15));

    for (int a : {0, -1, -2, -3, -5}) {
        for (double x : {0.1, 0.6, 1.0, 5.0, 30.0}) {
            double want = (double)gamma_oracle(a, (long double)x);
            CAPTURE(a);
            CAPTURE(x);
            CHECK(rel_diff(upper_gamma_nonpos(a, x), want) <= 1e-11);
        }
    }

    CHECK_THROWS_AS(upper_gamma_nonpos(1, 1.0), std::domain_error);
    CHECK_THROWS_AS(upper_gamma_nonpos(-1, 0.0), std::domain_error);
    CHECK_THROWS_AS(upper_gamma_nonpos(-1, -2.0), std::domain_error);
}

TEST_CASE("gamma recurrence ties adjacent orders together") {
    // Gamma(a+1, x) = a * Gamma(a, x) + x^a exp(-x), valid for a <= -1 so both
    // sides stay within the non-positive-order implementation.
    for (int a : {-6, -5, -4, -3, -2, -1}) {
        for (double x : {0.01, 0.1, 0.5, 1.0, 3.0, 10.0, 25.0}) {
            double lhs = upper_gamma_nonpos(a + 1, x);
            double rhs = (double)a * upper_gamma_nonpos(a, x) +
                         std::pow(x, (double)a) * std::exp(-x);
            CAPTURE(a);
            CAPTURE(x);
            CHECK(rel_diff(lhs, rhs) <= 1e-11);
        }
    }
}

TEST_CASE("e1_difference frozen value and basic behaviour") {
    CHECK(e1_difference(1.0, 2.0) == doctest::Approx(0.17048342368745915).epsilon(1e-13));
    CHECK(e1_difference(3.0, 3.0) == 0.0);
    CHECK(e1_difference(0.25, 8.0) > 0.0);
    CHECK_THROWS_AS(e1_difference(2.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(e1_difference(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(e1_difference(-1.0, 1.0), std::domain_error);
}

TEST_CASE("e1_difference survives the cancellation regimes") {
    struct Pair {
        double lo, hi;
    };
    // Nearly equal operands, deep tails, and plain well-separated cases.
    const Pair pairs[] = {{1.0, 1.0 + 5e-7}, {3.0, 3.0 + 2.5e-6}, {0.05, 0.051},
                          {50.0, 51.0},      {120.0, 125.0},      {500.0, 500.5},
                          {1.0, 40.0},       {0.001, 0.002},      {600.0, 700.0}};
    for (const Pair& p : pairs) {
        double want = (double)e1_diff_oracle((long double)p.lo, (long double)p.hi);
        CAPTURE(p.lo);
        CAPTURE(p.hi);
        CHECK(rel_diff(e1_difference(p.lo, p.hi), want) <= 1e-10);
    }
    // Both operands underflow: the difference is indistinguishable from zero
    // in double precision and must not trip any internal domain check.
    CHECK(e1_difference(800.0, 802.0) >= 0.0);
    CHECK(e1_difference(800.0, 802.0) <= 1e-300);
}

TEST_CASE("e1_difference is monotone in each endpoint") {
    CHECK(e1_difference(1.0, 3.0) > e1_difference(1.0, 2.0));
    CHECK(e1_difference(1.0, 2.0) > e1_difference(1.5, 2.0));
}

TEST_CASE("simple difference agrees with direct subtraction where that is safe") {
    double direct = exp_integral_e1(0.5) - exp_integral_e1(4.0);
    CHECK(e1_difference(0.5, 4.0) == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("scaled e1 difference extends the usable range") {
    // Where the plain difference is representable, scaling by exp(lo) must be
    // consistent with it.
    for (double lo : {0.5, 5.0, 20.0}) {
        for (double w : {0.1, 2.0, 30.0}) {
            double hi = lo + w;
            double plain = e1_difference(lo, hi);
            double scaled = e1_difference_scaled(lo, hi);
            CAPTURE(lo);
            CAPTURE(hi);
            CHECK(rel_diff(scaled, std::exp(lo) * plain) <= 1e-9);
        }
    }
    // Far beyond exp overflow: exp(800) * (E1(800) - E1(801)) stays O(1e-3).
    double v = e1_difference_scaled(800.0, 801.0);
    long double want = integrate_ld(
        [](long double u) { return expl(-u) / (800.0L + u); }, 0.0L, 1.0L);
    CHECK(rel_diff(v, (double)want) <= 1e-10);
    CHECK(e1_difference_scaled(4.0, 4.0) == 0.0);
    CHECK_THROWS_AS(e1_difference_scaled(5.0, 4.0), std::domain_error);
}

TEST_CASE("scaled gamma difference matches its defining integral") {
    for (int a : {0, -1, -3}) {
        for (double lo : {2.0, 60.0, 900.0}) {
            double hi = lo + 3.0;
            long double want = integrate_ld(
                [a, lo](long double u) {
                    return powl((long double)lo + u, (long double)(a - 1)) * expl(-u);
                },
                0.0L, (long double)(hi - lo));
            CAPTURE(a);
            CAPTURE(lo);
            CHECK(rel_diff(gamma_difference_nonpos_scaled(a, lo, hi), (double)want) <= 1e-10);
        }
    }
    // Consistency with the unscaled version in the representable region.
    double plain = gamma_difference_nonpos(-2, 1.5, 2.5);
    double scaled = gamma_difference_nonpos_scaled(-2, 1.5, 2.5);
    CHECK(rel_diff(scaled, std::exp(1.5) * plain) <= 1e-9);
    CHECK_THROWS_AS(gamma_difference_nonpos(1, 1.0, 2.0), std::domain_error);
}

TEST_CASE("gamma difference handles nearly equal and well separated operands") {
    for (int a : {0, -1, -2}) {
        struct Pair {
            double lo, hi;
        };
        const Pair pairs[] = {{0.5, 0.5 + 1e-7}, {2.0, 9.0}, {40.0, 41.0}};
        for (const Pair& p : pairs) {
            long double want = integrate_ld(
                [a, p](long double u) {
                    return powl((long double)p.lo + u, (long double)(a - 1)) * expl(-u);
                },
                0.0L, (long double)(p.hi - p.lo));
            want *= expl((long double)-p.lo);
            CAPTURE(a);
            CAPTURE(p.lo);
            CAPTURE(p.hi);
            CHECK(rel_diff(gamma_difference_nonpos(a, p.lo, p.hi), (double)want) <= 1e-10);
        }
    }
}
