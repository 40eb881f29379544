#include "cogrelay/quad_oracle.hpp"

#include "cogrelay/quadrature.hpp"

#include <cmath>

namespace cogrelay {
namespace {

// Channel-derived constants shared by both integration levels.
struct Kernel {
    double a_cap, b_cap, c_cap, d_cap; // A, B, C, D of the derivation
    double p_pt, n0, theta_s;
    int n_relays;
};

Kernel make_kernel(const ScenarioParams& p, const PowerBudget& budget) {
    return {p.omega_st_sr * budget.p_st, p.omega_sr_sd * budget.p_sr,
            p.omega_st_sd * budget.p_st, p.omega_pt_sr * p.p_pt,
            p.p_pt,        p.n0,         thresholds(p).theta_s,
            p.n_relays};
}

// Conditional on the destination-side interference gain y, the per-relay
// min SINR survives z with probability
//   G(z) = exp(-a z) / (1 + b z),  a = n0/A + (p_pt y + n0)/B,  b = D/A,
// so the best of N relays has F_Z(z) = (1 - G(z))^N and density
//   f_Z(z) = N (1-G)^{N-1} exp(-a z) (a (1+b z) + b) / (1+b z)^2.
double conditional(const Kernel& k, double y, OutageMode mode, const QuadConfig& cfg) {
    const double interf = k.p_pt * y + k.n0;
    const double a = k.n0 / k.a_cap + interf / k.b_cap;
    const double b = k.d_cap / k.a_cap;
    const double th = k.theta_s;
    const int n = k.n_relays;

    auto survive = [&](double z) { return std::exp(-a * z) / (1.0 + b * z); };
    if (mode == OutageMode::relay_only)
        return std::pow(1.0 - survive(th), n);

    const double direct_rate = interf / k.c_cap; // gamma_SD ~ Exp with this rate
    auto integrand = [&](double z) {
        const double g = survive(z);
        const double f_z = n * std::pow(1.0 - g, n - 1) * std::exp(-a * z) *
                           (a * (1.0 + b * z) + b) / ((1.0 + b * z) * (1.0 + b * z));
        const double f_direct_cdf = 1.0 - std::exp(-(th - z) * direct_rate);
        return f_direct_cdf * f_z;
    };
    // The inner integral is kept a notch tighter than the outer request so
    // the outer error estimate stays meaningful.
    quad::Options inner{std::min(cfg.rel_tol, 1e-12), std::min(cfg.abs_tol, 1e-15),
                        cfg.max_subdivisions};
    // Under heavy interference f_Z collapses into a boundary layer of width
    // 1/a at z = 0 which coarse samples of an adaptive rule can miss
    // entirely (the integrand underflows to zero at every probe).  Cutting
    // at ~30 e-foldings pins a panel onto the layer so its mass is never
    // silently dropped.
    const double cut = 30.0 / a;
    if (cut < th) {
        return quad::integrate_or_throw(integrand, 0.0, cut, inner) +
               quad::integrate_or_throw(integrand, cut, th, inner);
    }
    return quad::integrate_or_throw(integrand, 0.0, th, inner);
}

} // namespace

double conditional_outage_given_y(const ScenarioParams& p, const PowerBudget& budget,
                                  double y, OutageMode mode, const QuadConfig& cfg) {
    validate_params(p);
    if (budget.p_st <= 0.0) return 1.0;
    return conditional(make_kernel(p, budget), y, mode, cfg);
}

double outage_by_quadrature(const ScenarioParams& p, const PowerBudget& budget,
                            OutageMode mode, const QuadConfig& cfg) {
    validate_params(p);
    if (budget.p_st <= 0.0) return 1.0;
    const Kernel k = make_kernel(p, budget);
    const double th = k.theta_s;

    if (budget.p_sr <= 0.0) {
        // Dead relay chain: only reachable with a hand-pinned budget (the
        // power budget silences both hops together).  The relay term is a
        // sure outage; with the direct link the outage has a closed CDF.
        if (mode == OutageMode::relay_only) return 1.0;
        const double e_cap = p.omega_pt_sd * p.p_pt;
        return 1.0 - std::exp(-th * k.n0 / k.c_cap) / (1.0 + th * e_cap / k.c_cap);
    }

    const double y_max =
        cfg.y_truncation > 0.0 ? cfg.y_truncation : p.omega_pt_sd * std::log(1e16);
    auto outer = [&](double y) {
        const double weight = std::exp(-y / p.omega_pt_sd) / p.omega_pt_sd;
        return weight * conditional(k, y, mode, cfg);
    };
    quad::Options opts{cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions};
    return quad::integrate_or_throw(outer, 0.0, y_max, opts);
}

double outage_by_quadrature(const ScenarioParams& p, OutageMode mode, const QuadConfig& cfg) {
    return outage_by_quadrature(p, power_budget(p), mode, cfg);
}

} // namespace cogrelay
