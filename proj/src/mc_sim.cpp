#include "cogrelay/mc_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace cogrelay {
namespace {

constexpr double kWilsonZ = 1.959963984540054; // 97.5% normal quantile

std::uint64_t splitmix64_next(std::uint64_t& s) {
    s += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t mix64(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double exponential(SampleStream& rng, double mean) {
    return -mean * std::log(rng.uniform_pos());
}

// Runs fn(range_begin, range_end) -> count over a fixed partition of
// [0, samples) and reduces the counts in partition order, so the total is
// independent of scheduling and of the worker count.
template <typename Fn>
std::uint64_t partitioned_count(std::uint64_t samples, int workers, Fn fn) {
    const int n_workers =
        static_cast<int>(std::clamp<std::uint64_t>(std::max(workers, 1), 1, samples));
    std::vector<std::uint64_t> counts(n_workers, 0);
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w) {
        const std::uint64_t begin = samples * w / n_workers;
        const std::uint64_t end = samples * (w + 1) / n_workers;
        pool.emplace_back([&, w, begin, end] { counts[w] = fn(begin, end); });
    }
    for (auto& t : pool) t.join();
    std::uint64_t total = 0;
    for (const std::uint64_t c : counts) total += c;
    return total;
}

} // namespace

SelectionRule resolve_selection(const McConfig& cfg) {
    if (cfg.selection_rule) return *cfg.selection_rule;
    return cfg.sinr_model == SinrModel::exact_harmonic ? SelectionRule::by_exact
                                                       : SelectionRule::by_bound;
}

SampleStream::SampleStream(std::uint64_t seed, std::uint64_t sample_index)
    : state_(mix64(seed ^ (mix64(sample_index) + 0x9E3779B97F4A7C15ULL))) {}

std::uint64_t SampleStream::next_u64() { return splitmix64_next(state_); }

double SampleStream::uniform_pos() {
    // 53-bit mantissa, shifted into (0, 1]: never returns 0, so -log() of it
    // is finite.
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

void draw_channels_into(const ScenarioParams& p, std::uint64_t seed,
                        std::uint64_t sample_index, ChannelDraw& out) {
    SampleStream rng(seed, sample_index);
    const std::size_t n = static_cast<std::size_t>(p.n_relays);
    out.st_sr.resize(n);
    out.pt_sr.resize(n);
    out.sr_sd.resize(n);
    out.sr_pd.resize(n);
    out.pt_pd = exponential(rng, p.omega_pt_pd);
    out.st_pd = exponential(rng, p.omega_st_pd);
    out.st_sd = exponential(rng, p.omega_st_sd);
    out.pt_sd = exponential(rng, p.omega_pt_sd);
    for (std::size_t i = 0; i < n; ++i) {
        out.st_sr[i] = exponential(rng, p.omega_st_sr);
        out.pt_sr[i] = exponential(rng, p.omega_pt_sr);
        out.sr_sd[i] = exponential(rng, p.omega_sr_sd);
        out.sr_pd[i] = exponential(rng, p.omega_sr_pd);
    }
}

ChannelDraw draw_channels(const ScenarioParams& p, std::uint64_t seed,
                          std::uint64_t sample_index) {
    ChannelDraw out;
    draw_channels_into(p, seed, sample_index, out);
    return out;
}

double end_to_end_sinr(const ChannelDraw& draw, const ScenarioParams& p,
                       const PowerBudget& budget, SinrModel model, CombineMode combine,
                       SelectionRule rule) {
    const double den_sd = p.p_pt * draw.pt_sd + p.n0;
    const double g_direct = budget.p_st * draw.st_sd / den_sd;
    if (combine == CombineMode::direct_only) return g_direct;

    double best_key = -1.0;
    double best_exact = 0.0;
    double best_bound = 0.0;
    for (std::size_t i = 0; i < draw.st_sr.size(); ++i) {
        const double g_sr =
            budget.p_st * draw.st_sr[i] / (p.p_pt * draw.pt_sr[i] + p.n0);
        const double g_rd = budget.p_sr * draw.sr_sd[i] / den_sd;
        const double bound = std::min(g_sr, g_rd);
        const double exact = g_sr * g_rd / (1.0 + g_sr + g_rd);
        const double key = rule == SelectionRule::by_bound ? bound : exact;
        if (key > best_key) {
            best_key = key;
            best_exact = exact;
            best_bound = bound;
        }
    }
    const double relayed = model == SinrModel::max_min_bound ? best_bound : best_exact;
    return combine == CombineMode::mrc_with_direct ? g_direct + relayed : relayed;
}

OutageEstimate wilson_interval(std::uint64_t outage_count, std::uint64_t samples,
                               std::uint64_t seed) {
    if (samples == 0) throw std::invalid_argument("wilson_interval needs samples > 0");
    const double n = static_cast<double>(samples);
    const double p_hat = static_cast<double>(outage_count) / n;
    const double z2 = kWilsonZ * kWilsonZ;
    const double denom = 1.0 + z2 / n;
    const double center = (p_hat + z2 / (2.0 * n)) / denom;
    const double half =
        kWilsonZ * std::sqrt(p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n)) / denom;
    OutageEstimate e;
    e.p_hat = p_hat;
    // At the empirical endpoints the Wilson bound equals the endpoint
    // analytically; snap it there instead of leaving a one-ulp sqrt residue.
    e.ci_low = outage_count == 0 ? 0.0 : std::max(0.0, center - half);
    e.ci_high = outage_count == samples ? 1.0 : std::min(1.0, center + half);
    e.samples = samples;
    e.seed = seed;
    return e;
}

OutageEstimate estimate_secondary_outage(const ScenarioParams& p, const PowerBudget& budget,
                                         const McConfig& cfg, int workers) {
    validate_params(p);
    if (cfg.samples == 0) throw std::invalid_argument("mc samples must be > 0");
    const double theta_s = thresholds(p).theta_s;
    const SelectionRule rule = resolve_selection(cfg);
    const std::uint64_t count = partitioned_count(
        cfg.samples, workers, [&](std::uint64_t begin, std::uint64_t end) {
            ChannelDraw draw; // workspace reused across the range
            std::uint64_t c = 0;
            for (std::uint64_t i = begin; i < end; ++i) {
                draw_channels_into(p, cfg.seed, i, draw);
                const double sinr =
                    end_to_end_sinr(draw, p, budget, cfg.sinr_model, cfg.combine, rule);
                if (sinr < theta_s) ++c;
            }
            return c;
        });
    return wilson_interval(count, cfg.samples, cfg.seed);
}

OutageEstimate estimate_secondary_outage(const ScenarioParams& p, const McConfig& cfg,
                                         int workers) {
    return estimate_secondary_outage(p, power_budget(p), cfg, workers);
}

OutageEstimate estimate_primary_outage(const ScenarioParams& p, double p_secondary,
                                       double omega_interferer_pd, const McConfig& cfg,
                                       int workers) {
    validate_params(p);
    if (cfg.samples == 0) throw std::invalid_argument("mc samples must be > 0");
    if (p_secondary < 0.0 || !std::isfinite(p_secondary))
        throw std::invalid_argument("p_secondary must be finite and >= 0");
    if (omega_interferer_pd <= 0.0 || !std::isfinite(omega_interferer_pd))
        throw std::invalid_argument("omega_interferer_pd must be positive");
    const double theta_p = thresholds(p).theta_p;
    const std::uint64_t count = partitioned_count(
        cfg.samples, workers, [&](std::uint64_t begin, std::uint64_t end) {
            std::uint64_t c = 0;
            for (std::uint64_t i = begin; i < end; ++i) {
                SampleStream rng(cfg.seed, i);
                const double g_link = exponential(rng, p.omega_pt_pd);
                const double g_interf = exponential(rng, omega_interferer_pd);
                const double sinr =
                    p.p_pt * g_link / (p_secondary * g_interf + p.n0);
                if (sinr < theta_p) ++c;
            }
            return c;
        });
    return wilson_interval(count, cfg.samples, cfg.seed);
}

} // namespace cogrelay
