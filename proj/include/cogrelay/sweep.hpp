#pragma once

#include "cogrelay/closed_form.hpp"
#include "cogrelay/mc_sim.hpp"
#include "cogrelay/scenario.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace cogrelay {

enum class Axis { p_pt_db, lambda_p, p_pk_db, n_relays, r_s };
enum class Engine { closed_form, monte_carlo, quadrature };
enum class Curve { mrc_with_direct, relay_only };

std::string_view to_string(Axis a);
std::string_view to_string(Engine e);
std::string_view to_string(Curve c);

// A sweep file is a scenario file plus the sweep controls:
//   sweep_axis   = p_pt_db | lambda_p | p_pk_db | n_relays | r_s
//   sweep_values = comma-separated, strictly increasing
//   engines      = comma-separated subset of closed_form, monte_carlo, quadrature
//   curves       = comma-separated subset of mrc_with_direct, relay_only
//   mc_samples, mc_seed = Monte Carlo controls (optional; 1000000 / 42)
// The scenario keys provide the base point; the axis overrides one field per
// grid value.
struct SweepSpec {
    Axis axis = Axis::p_pt_db;
    std::vector<double> grid;
    ScenarioParams base;
    std::vector<Engine> engines;
    std::vector<Curve> curves;
    std::uint64_t mc_samples = 1'000'000;
    std::uint64_t mc_seed = 42;
};

SweepSpec parse_sweep(std::string_view text);
SweepSpec load_sweep(const std::filesystem::path& path);

ScenarioParams apply_axis(const ScenarioParams& base, Axis axis, double value);

// Raised when a grid point leaves closed_form (the only requested engine)
// without a value; maps to the validity exit code in the CLI.
struct OutsideValidityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SweepRow {
    Axis axis = Axis::p_pt_db;
    double axis_value = 0.0;
    Curve curve = Curve::mrc_with_direct;
    Engine engine = Engine::closed_form;
    std::optional<double> outage;
    std::optional<double> ci_low, ci_high;        // Monte Carlo rows only
    double p_st = 0.0, p_sr = 0.0;
    Binding st_binding = Binding::peak, sr_binding = Binding::peak;
    std::optional<Validity> validity;             // closed_form rows only
};

// One row per (grid value x curve x engine), in that loop order with curves
// and engines in the order given by the spec.  `workers` parallelises over
// grid points; the output is identical for any worker count.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, int workers = 1);

// CSV with the fixed header
// axis_name,axis_value,curve,engine,outage,ci_low,ci_high,p_st,p_sr,st_binding,sr_binding,validity
// and every number rendered by std::to_chars with 17 significant digits, so
// the bytes are locale-independent and reproducible.
std::string to_csv(const std::vector<SweepRow>& rows);
void write_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

} // namespace cogrelay
