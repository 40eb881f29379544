#pragma once

#include "cogrelay/scenario.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace cogrelay {

enum class SinrModel { exact_harmonic, max_min_bound };
enum class CombineMode { mrc_with_direct, relay_only, direct_only };
enum class SelectionRule { by_exact, by_bound };

struct McConfig {
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 42;
    SinrModel sinr_model = SinrModel::max_min_bound;
    CombineMode combine = CombineMode::mrc_with_direct;
    // Defaults to the rule matching sinr_model; setting it explicitly allows
    // cross pairings (e.g. exact SINR of the bound-selected relay).
    std::optional<SelectionRule> selection_rule;
};

SelectionRule resolve_selection(const McConfig& cfg);

// Counter-based uniform stream: sample index i of run `seed` owns its own
// splitmix64 sequence, so any worker partitioning of the index range draws
// identical variates.  Draw j of a sample is the j-th output of its stream.
class SampleStream {
public:
    SampleStream(std::uint64_t seed, std::uint64_t sample_index);
    std::uint64_t next_u64();
    double uniform_pos(); // in (0, 1], safe for -log()

private:
    std::uint64_t state_;
};

// One realisation of every channel gain.  Draw order within the sample's
// stream is fixed and part of the reproducibility contract:
//   0: pt_pd   1: st_pd   2: st_sd   3: pt_sd
// then per relay i: st_sr[i], pt_sr[i], sr_sd[i], sr_pd[i].
struct ChannelDraw {
    double pt_pd = 0.0;
    double st_pd = 0.0;
    double st_sd = 0.0;
    double pt_sd = 0.0;
    std::vector<double> st_sr, pt_sr, sr_sd, sr_pd;
};

ChannelDraw draw_channels(const ScenarioParams& p, std::uint64_t seed,
                          std::uint64_t sample_index);
void draw_channels_into(const ScenarioParams& p, std::uint64_t seed,
                        std::uint64_t sample_index, ChannelDraw& out);

// Receiver-side SINR of one realisation.  The destination's interference
// denominator p_pt * pt_sd + n0 is shared between the direct link and every
// relay->destination leg, as both land on the same receiver in the same
// slot.  exact_harmonic uses g1 g2 / (1 + g1 + g2) for the relayed path,
// max_min_bound uses min(g1, g2).
double end_to_end_sinr(const ChannelDraw& draw, const ScenarioParams& p,
                       const PowerBudget& budget, SinrModel model, CombineMode combine,
                       SelectionRule rule);

struct OutageEstimate {
    double p_hat = 0.0;
    double ci_low = 0.0;  // Wilson 95% interval
    double ci_high = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

OutageEstimate wilson_interval(std::uint64_t outage_count, std::uint64_t samples,
                               std::uint64_t seed);

// Secondary outage Pr[SINR < theta_s].  The result depends only on
// (params, cfg), not on `workers`: counts are accumulated per fixed index
// ranges and reduced in range order.
OutageEstimate estimate_secondary_outage(const ScenarioParams& p, const McConfig& cfg,
                                         int workers = 1);
OutageEstimate estimate_secondary_outage(const ScenarioParams& p, const PowerBudget& budget,
                                         const McConfig& cfg, int workers = 1);

// Primary outage under one secondary interferer at power p_secondary with
// mean gain omega_interferer_pd.  Stream layout: draw 0 is the primary link
// gain, draw 1 the interferer gain.
OutageEstimate estimate_primary_outage(const ScenarioParams& p, double p_secondary,
                                       double omega_interferer_pd, const McConfig& cfg,
                                       int workers = 1);

} // namespace cogrelay
