#include "cogrelay/closed_form.hpp"

#include "cogrelay/quad_oracle.hpp"
#include "cogrelay/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cogrelay {
namespace {

constexpr double kDegenTol = 1e-9;          // pole-collision tolerance, relative
constexpr double kCancelRatio = 1e8;        // max |term| / |sum| before fallback
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct Caps {
    double a, b, c, d, e; // A, B, C, D, E channel-power products
};

Caps caps_of(const ScenarioParams& p, const PowerBudget& budget) {
    return {p.omega_st_sr * budget.p_st, p.omega_sr_sd * budget.p_sr,
            p.omega_st_sd * budget.p_st, p.omega_pt_sr * p.p_pt,
            p.omega_pt_sd * p.p_pt};
}

double sign_of(int m) { return (m % 2 == 0) ? 1.0 : -1.0; }

// exp(lo) * (E1(lo) - E1(lo+delta)) without forming exp(lo) once it is large.
double scaled_e1_diff(double lo, double delta) {
    if (lo > 50.0) return specfun::e1_difference_scaled(lo, lo + delta);
    return std::exp(lo) * specfun::e1_difference(lo, lo + delta);
}

double scaled_gamma_diff(int a, double lo, double delta) {
    if (lo > 50.0) return specfun::gamma_difference_nonpos_scaled(a, lo, lo + delta);
    return std::exp(lo) * specfun::gamma_difference_nonpos(a, lo, lo + delta);
}

// Watches an alternating sum for catastrophic cancellation.
struct SumGuard {
    double total = 0.0;
    double peak = 0.0;
    void add(double term) {
        total += term;
        peak = std::max(peak, std::abs(term));
    }
    void check(const char* where) const {
        if (!std::isfinite(total))
            throw NumericalHazard(std::string(where) + ": non-finite intermediate");
        if (peak > 1e-290 && peak > kCancelRatio * std::max(std::abs(total), 1e-290))
            throw NumericalHazard(std::string(where) + ": alternating sum cancels beyond " +
                                  std::to_string(kCancelRatio));
    }
};

// J(k) = integral_0^theta exp(-s z) / ((z+pi1)^k (z+tau)) dz via the partial
// fraction 1/((z+pi1)^k (z+tau)) expanded around both poles.  Every
// exp(s pi1) Gamma-difference product goes through the scaled kernels.
double generic_j(int k, const AuxConstants& x, double theta_s) {
    if (x.degenerate)
        throw NumericalHazard("j-term requested on degenerate constants (n=" +
                              std::to_string(x.n) + ")");
    const double delta = x.s * theta_s;
    const double lo_pi = x.s * x.pi1;
    const double lo_tau = x.s * x.tau;
    SumGuard g;
    for (int m = 0; m <= k - 2; ++m)
        g.add(sign_of(m) / std::pow(x.chi, m + 1) * std::pow(x.s, k - m - 1) *
              scaled_gamma_diff(m - k + 1, lo_pi, delta));
    g.add(sign_of(k - 1) / std::pow(x.chi, k) * scaled_e1_diff(lo_pi, delta));
    g.add(sign_of(k) / std::pow(x.chi, k) * scaled_e1_diff(lo_tau, delta));
    g.check("j-term");
    return g.total;
}

} // namespace

std::uint64_t binomial(int n, int k) {
    if (n < 0 || k < 0 || k > n)
        throw std::domain_error("binomial arguments out of range");
    if (n > 60)
        throw std::domain_error(
            "binomial limited to n <= 60 to stay exact in 64-bit arithmetic, got n = " +
            std::to_string(n));
    k = std::min(k, n - k);
    std::uint64_t c = 1;
    for (int i = 1; i <= k; ++i) {
        c = c * static_cast<std::uint64_t>(n - k + i); // divisible by i at each step
        c /= static_cast<std::uint64_t>(i);
    }
    return c;
}

std::string_view to_string(Validity v) {
    switch (v) {
        case Validity::valid: return "valid";
        case Validity::outside_validity_region: return "outside_validity_region";
        case Validity::degenerate_fallback: return "degenerate_fallback";
    }
    return "?";
}

AuxConstants aux_constants(const ScenarioParams& p, const PowerBudget& budget, int n) {
    const Caps c = caps_of(p, budget);
    const double theta_s = thresholds(p).theta_s;
    AuxConstants x;
    x.n = n;
    x.s = p.n0 * (n / c.a + n / c.b - 1.0 / c.c);
    x.mu = c.e * (n / c.b - 1.0 / c.c);
    x.pi1 = c.a / c.d;
    x.tau = (c.e * theta_s / c.c + 1.0) / x.mu;
    x.chi = x.tau - x.pi1;

    const double s_scale =
        std::max({1.0, p.n0 * n / c.a, p.n0 * n / c.b, p.n0 / c.c});
    const double mu_scale = std::max({1.0, c.e * n / c.b, c.e / c.c});
    const double chi_scale = std::max({1.0, std::abs(x.tau), x.pi1});
    x.degenerate = !std::isfinite(x.s) || !std::isfinite(x.mu) || !std::isfinite(x.tau) ||
                   !std::isfinite(x.chi) || std::abs(x.s) <= kDegenTol * s_scale ||
                   std::abs(x.mu) <= kDegenTol * mu_scale ||
                   std::abs(x.chi) <= kDegenTol * chi_scale;
    return x;
}

Validity validity_check(const ScenarioParams& p, const PowerBudget& budget) {
    for (int n = 1; n <= p.n_relays; ++n) {
        const AuxConstants x = aux_constants(p, budget, n);
        // Strictly negative s or mu puts the scenario outside the region the
        // series was derived for; a near-zero value is a degenerate pole
        // collision instead, handled by the quadrature fallback.
        if (x.s < 0.0 && std::abs(x.s) > kDegenTol) return Validity::outside_validity_region;
        if (x.mu < 0.0 && std::abs(x.mu) > kDegenTol) return Validity::outside_validity_region;
        if (x.degenerate) return Validity::degenerate_fallback;
    }
    return Validity::valid;
}

double j21(int n, const AuxConstants& aux, double theta_s) {
    return generic_j(n, aux, theta_s);
}

double j22(int n, const AuxConstants& aux, double theta_s) {
    return generic_j(n + 1, aux, theta_s);
}

// Second-order pole at -tau: residues give (m+1)/chi^{m+2} on the pi1 ladder,
// n/chi^{n+1} on both E1 differences and an s Gamma(-1, .) term at tau.
double j3(int n, const AuxConstants& x, double theta_s) {
    if (x.degenerate)
        throw NumericalHazard("j3 requested on degenerate constants (n=" +
                              std::to_string(x.n) + ")");
    const double delta = x.s * theta_s;
    const double lo_pi = x.s * x.pi1;
    const double lo_tau = x.s * x.tau;
    SumGuard g;
    for (int m = 0; m <= n - 2; ++m)
        g.add(sign_of(m) * (m + 1) / std::pow(x.chi, m + 2) * std::pow(x.s, n - m - 1) *
              scaled_gamma_diff(m - n + 1, lo_pi, delta));
    g.add(sign_of(n - 1) * n / std::pow(x.chi, n + 1) * scaled_e1_diff(lo_pi, delta));
    g.add(sign_of(n) / std::pow(x.chi, n) * x.s * scaled_gamma_diff(-1, lo_tau, delta));
    g.add(sign_of(n) * n / std::pow(x.chi, n + 1) * scaled_e1_diff(lo_tau, delta));
    g.check("j3");
    return g.total;
}

double term_i1(const ScenarioParams& p, const PowerBudget& budget) {
    const Caps c = caps_of(p, budget);
    const double th = thresholds(p).theta_s;
    const int n_relays = p.n_relays;
    const double decay = th * p.n0 * (1.0 / c.a + 1.0 / c.b);
    const double pole_sr = 1.0 + th * c.d / c.a;
    SumGuard g;
    for (int n = 0; n <= n_relays; ++n)
        g.add(static_cast<double>(binomial(n_relays, n)) * sign_of(n) * std::exp(-n * decay) /
              (std::pow(pole_sr, n) * (1.0 + n * th * c.e / c.b)));
    g.check("i1");
    return std::clamp(g.total, 0.0, 1.0);
}

namespace {

struct Pieces {
    double i2 = 0.0;
    double i3 = 0.0;
    std::vector<PerRelayTerms> per_n;
};

Pieces cross_terms(const ScenarioParams& p, const PowerBudget& budget) {
    const Caps c = caps_of(p, budget);
    const double th = thresholds(p).theta_s;
    const int n_relays = p.n_relays;
    const double inv_ab = p.n0 / c.a + p.n0 / c.b;
    Pieces out;
    SumGuard g2, g3;
    for (int n = 1; n <= n_relays; ++n) {
        const AuxConstants x = aux_constants(p, budget, n);
        const double v21 = j21(n, x, th);
        const double v22 = j22(n, x, th);
        const double v3 = j3(n, x, th);
        out.per_n.push_back({n, v21, v22, v3});
        const double weight =
            n * static_cast<double>(binomial(n_relays, n)) * sign_of(n + 1);
        const double pi_pow = std::pow(x.pi1, n);
        g2.add(weight * (pi_pow / x.mu) * (inv_ab * v21 + v22));
        g3.add(weight * (pi_pow / (x.mu * x.mu)) * v3);
    }
    g2.check("i2");
    g3.check("i3");
    const double prefactor = std::exp(-th * p.n0 / c.c);
    out.i2 = prefactor * g2.total;
    out.i3 = prefactor * (c.e / c.b) * g3.total;
    return out;
}

} // namespace

double term_i2(const ScenarioParams& p, const PowerBudget& budget) {
    return cross_terms(p, budget).i2;
}

double term_i3(const ScenarioParams& p, const PowerBudget& budget) {
    return cross_terms(p, budget).i3;
}

ClosedFormResult secondary_outage_mrc(const ScenarioParams& p, const PowerBudget& budget) {
    validate_params(p);
    ClosedFormResult r;
    if (budget.p_st <= 0.0) {
        // Silenced secondary: no transmission in either slot, sure outage.
        r.i1 = 1.0;
        r.outage_mrc = 1.0;
        r.outage_relay_only = 1.0;
        return r;
    }

    bool i1_substituted = false;
    try {
        r.i1 = term_i1(p, budget);
    } catch (const NumericalHazard&) {
        r.i1 = outage_by_quadrature(p, budget, OutageMode::relay_only);
        i1_substituted = true;
    }
    r.outage_relay_only = r.i1;

    r.validity = validity_check(p, budget);
    if (r.validity == Validity::outside_validity_region) {
        r.i2 = kNan;
        r.i3 = kNan;
        r.outage_mrc = kNan;
        return r;
    }

    if (r.validity == Validity::valid && !i1_substituted) {
        try {
            Pieces x = cross_terms(p, budget);
            r.i2 = x.i2;
            r.i3 = x.i3;
            r.per_n_terms = std::move(x.per_n);
            r.outage_mrc = std::clamp(r.i1 - r.i2 - r.i3, 0.0, 1.0);
            return r;
        } catch (const NumericalHazard&) {
            // fall through to the labelled quadrature substitution
        }
    }
    r.validity = Validity::degenerate_fallback;
    r.i2 = kNan;
    r.i3 = kNan;
    r.per_n_terms.clear();
    r.outage_mrc = outage_by_quadrature(p, budget, OutageMode::mrc_with_direct);
    return r;
}

ClosedFormResult secondary_outage_mrc(const ScenarioParams& p) {
    return secondary_outage_mrc(p, power_budget(p));
}

} // namespace cogrelay
