#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cogrelay {

// Channel statistics, powers and rate targets for one network configuration.
// Powers are linear and noise-referenced (0 dB corresponds to n0).
struct ScenarioParams {
    double omega_pt_pd = 1.0; // primary Tx -> primary Rx mean channel gain
    double omega_st_pd = 1.0; // secondary Tx -> primary Rx (interference)
    double omega_sr_pd = 1.0; // relay -> primary Rx (interference)
    double omega_st_sd = 1.0; // secondary Tx -> secondary Rx (direct link)
    double omega_pt_sd = 1.0; // primary Tx -> secondary Rx (interference)
    double omega_st_sr = 1.0; // secondary Tx -> relay
    double omega_pt_sr = 1.0; // primary Tx -> relay (interference)
    double omega_sr_sd = 1.0; // relay -> secondary Rx
    double p_pt = 1.0;        // primary transmit power
    double p_pk = 1.0;        // secondary peak power cap
    double n0 = 1.0;          // noise power
    double r_p = 0.5;         // primary target rate (bits/s/Hz)
    double r_s = 0.5;         // secondary target rate (bits/s/Hz)
    double lambda_p = 0.1;    // primary outage tolerance, in (0, 1)
    int n_relays = 1;
};

struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Throws ScenarioError naming the offending field if any value is out of
// range (non-positive gain/power/rate, lambda_p outside (0,1), n_relays < 1,
// or a non-finite number).
void validate_params(const ScenarioParams& p);

struct Thresholds {
    double theta_p; // 2^r_p - 1, continuous primary transmission
    double theta_s; // 2^(2 r_s) - 1, two-slot half-duplex secondary
};
Thresholds thresholds(const ScenarioParams& p);

enum class Binding { peak, primary_outage, zero };
std::string_view to_string(Binding b);

struct PowerLimit {
    double power;
    Binding binding;
};

// Average primary outage probability when the primary link faces one
// interferer of mean gain omega_interferer_pd transmitting at p_secondary.
double primary_outage_given_power(const ScenarioParams& p, double p_secondary,
                                  double omega_interferer_pd);

// Largest secondary-transmitter / relay power honouring both the peak cap and
// the primary outage tolerance.  A tie between the two caps reports `peak`;
// an infeasible tolerance (primary outage above lambda_p even in silence)
// reports `zero` with power 0.
PowerLimit max_power_st(const ScenarioParams& p);
PowerLimit max_power_sr(const ScenarioParams& p);

struct PowerBudget {
    double p_st, p_sr;
    Binding st_binding, sr_binding;
};
PowerBudget power_budget(const ScenarioParams& p);

double db_to_linear(double db);
double linear_to_db(double linear);

// --- scenario file format -------------------------------------------------
//
// Flat `key = value` lines; '#' starts a comment; blank lines ignored.  Every
// key is required exactly once, powers via exactly one of the _db/_linear
// spellings.  Unknown keys are errors.

struct KeyValue {
    std::string key;
    std::string value;
    int line = 0;
};

// Syntax pass only: comment stripping, `key = value` splitting, duplicate
// detection.  Value semantics are left to the caller.
std::vector<KeyValue> parse_key_values(std::string_view text);

// Strict numeric parse of one entry (whole value must be consumed).
double parse_number(const KeyValue& kv);

ScenarioParams scenario_from_entries(const std::vector<KeyValue>& entries);
ScenarioParams parse_scenario(std::string_view text);
ScenarioParams load_scenario(const std::filesystem::path& path);

} // namespace cogrelay
