#include "cogrelay/closed_form.hpp"
#include "cogrelay/mc_sim.hpp"
#include "cogrelay/quad_oracle.hpp"
#include "cogrelay/quadrature.hpp"
#include "cogrelay/scenario.hpp"
#include "cogrelay/sweep.hpp"
#include "cogrelay/validate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

// Exit contract: 0 success / validation PASS, 2 configuration or input
// error, 3 scenario outside the closed form's validity region when
// closed_form is the only engine, 4 validation FAIL.
constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitValidity = 3;
constexpr int kExitValidationFail = 4;

cogrelay::Engine engine_from_name(const std::string& name) {
    if (name == "closed_form") return cogrelay::Engine::closed_form;
    if (name == "monte_carlo") return cogrelay::Engine::monte_carlo;
    if (name == "quadrature") return cogrelay::Engine::quadrature;
    throw cogrelay::ScenarioError("unknown engine `" + name +
                                  "` (expected closed_form, monte_carlo or quadrature)");
}

json scenario_json(const cogrelay::ScenarioParams& p) {
    return json{{"omega_pt_pd", p.omega_pt_pd}, {"omega_st_pd", p.omega_st_pd},
                {"omega_sr_pd", p.omega_sr_pd}, {"omega_st_sd", p.omega_st_sd},
                {"omega_pt_sd", p.omega_pt_sd}, {"omega_st_sr", p.omega_st_sr},
                {"omega_pt_sr", p.omega_pt_sr}, {"omega_sr_sd", p.omega_sr_sd},
                {"p_pt", p.p_pt},               {"p_pk", p.p_pk},
                {"n0", p.n0},                   {"r_p", p.r_p},
                {"r_s", p.r_s},                 {"lambda_p", p.lambda_p},
                {"n_relays", p.n_relays}};
}

json optional_number(double v) {
    if (std::isnan(v)) return nullptr;
    return v;
}

int run_eval(const std::string& file, const std::vector<std::string>& engine_names,
             std::uint64_t samples, std::uint64_t seed, int workers,
             const std::string& json_path) {
    const cogrelay::ScenarioParams p = cogrelay::load_scenario(file);
    const cogrelay::Thresholds th = cogrelay::thresholds(p);
    const cogrelay::PowerBudget budget = cogrelay::power_budget(p);

    std::vector<cogrelay::Engine> engines;
    for (const std::string& name : engine_names) engines.push_back(engine_from_name(name));

    std::cout.precision(12);
    std::cout << "scenario: " << file << "\n"
              << "thresholds: theta_p=" << th.theta_p << " theta_s=" << th.theta_s << "\n"
              << "budget: p_st=" << budget.p_st << " (" << cogrelay::to_string(budget.st_binding)
              << ") p_sr=" << budget.p_sr << " (" << cogrelay::to_string(budget.sr_binding)
              << ")\n";

    json out;
    out["scenario"] = scenario_json(p);
    out["thresholds"] = {{"theta_p", th.theta_p}, {"theta_s", th.theta_s}};
    out["budget"] = {{"p_st", budget.p_st},
                     {"p_sr", budget.p_sr},
                     {"st_binding", std::string(cogrelay::to_string(budget.st_binding))},
                     {"sr_binding", std::string(cogrelay::to_string(budget.sr_binding))}};

    bool outside = false;
    for (const cogrelay::Engine engine : engines) {
        switch (engine) {
            case cogrelay::Engine::closed_form: {
                const cogrelay::ClosedFormResult r = cogrelay::secondary_outage_mrc(p, budget);
                outside = r.validity == cogrelay::Validity::outside_validity_region;
                std::cout << "closed_form: outage_mrc=";
                if (outside)
                    std::cout << "n/a";
                else
                    std::cout << r.outage_mrc;
                std::cout << " outage_relay_only=" << r.outage_relay_only
                          << " validity=" << cogrelay::to_string(r.validity) << "\n";
                if (r.validity == cogrelay::Validity::valid)
                    std::cout << "             i1=" << r.i1 << " i2=" << r.i2
                              << " i3=" << r.i3 << "\n";
                json jc = {{"outage_mrc", optional_number(r.outage_mrc)},
                           {"outage_relay_only", r.outage_relay_only},
                           {"i1", r.i1},
                           {"i2", optional_number(r.i2)},
                           {"i3", optional_number(r.i3)},
                           {"validity", std::string(cogrelay::to_string(r.validity))}};
                json per_n = json::array();
                for (const auto& t : r.per_n_terms)
                    per_n.push_back(
                        {{"n", t.n}, {"j21", t.j21}, {"j22", t.j22}, {"j3", t.j3}});
                jc["per_n_terms"] = per_n;
                out["closed_form"] = jc;
                break;
            }
            case cogrelay::Engine::quadrature: {
                const double mrc = cogrelay::outage_by_quadrature(
                    p, budget, cogrelay::OutageMode::mrc_with_direct);
                const double relay = cogrelay::outage_by_quadrature(
                    p, budget, cogrelay::OutageMode::relay_only);
                std::cout << "quadrature: outage_mrc=" << mrc
                          << " outage_relay_only=" << relay << "\n";
                out["quadrature"] = {{"outage_mrc", mrc}, {"outage_relay_only", relay}};
                break;
            }
            case cogrelay::Engine::monte_carlo: {
                cogrelay::McConfig mc;
                mc.samples = samples;
                mc.seed = seed;
                mc.combine = cogrelay::CombineMode::mrc_with_direct;
                const cogrelay::OutageEstimate est =
                    cogrelay::estimate_secondary_outage(p, budget, mc, workers);
                mc.combine = cogrelay::CombineMode::relay_only;
                const cogrelay::OutageEstimate rel =
                    cogrelay::estimate_secondary_outage(p, budget, mc, workers);
                std::cout << "monte_carlo: outage_mrc=" << est.p_hat << " ci=["
                          << est.ci_low << ", " << est.ci_high << "]"
                          << " outage_relay_only=" << rel.p_hat << " (samples=" << samples
                          << " seed=" << seed << ")\n";
                out["monte_carlo"] = {{"outage_mrc", est.p_hat},
                                      {"ci_low", est.ci_low},
                                      {"ci_high", est.ci_high},
                                      {"outage_relay_only", rel.p_hat},
                                      {"samples", samples},
                                      {"seed", seed}};
                break;
            }
        }
    }

    if (!json_path.empty()) {
        std::ofstream jf(json_path, std::ios::binary);
        if (!jf) throw cogrelay::ScenarioError("cannot open output file " + json_path);
        jf << out.dump(2) << "\n";
    }

    if (outside && engines.size() == 1) {
        std::cerr << "error: scenario outside the closed form validity region and no other "
                     "engine requested\n";
        return kExitValidity;
    }
    return kExitOk;
}

int run_sweep_cmd(const std::string& file, const std::string& out_path, int workers) {
    const cogrelay::SweepSpec spec = cogrelay::load_sweep(file);
    const std::vector<cogrelay::SweepRow> rows = cogrelay::run_sweep(spec, workers);
    cogrelay::write_csv(rows, out_path);
    std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
    return kExitOk;
}

int run_validate(const std::string& file, std::uint64_t samples, std::uint64_t seed,
                 int workers) {
    const cogrelay::ScenarioParams p = cogrelay::load_scenario(file);
    cogrelay::ValidationConfig cfg;
    cfg.samples = samples;
    cfg.seed = seed;
    cfg.workers = workers;
    const cogrelay::ValidationReport report = cogrelay::run_validation(p, cfg);
    for (const cogrelay::CheckResult& c : report.checks)
        std::cout << "check " << c.name << ": " << (c.passed ? "PASS" : "FAIL") << " ("
                  << c.detail << ")\n";
    std::cout << (report.passed ? "VALIDATE PASS" : "VALIDATE FAIL") << "\n";
    return report.passed ? kExitOk : kExitValidationFail;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"outage analysis for an underlay cognitive relay network"};
    app.require_subcommand(1);

    std::string file;
    std::string out_path;
    std::string json_path;
    std::vector<std::string> engine_names{"closed_form"};
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 42;
    int workers = 1;

    CLI::App* eval = app.add_subcommand("eval", "evaluate one scenario");
    eval->add_option("file", file, "scenario file")->required();
    eval->add_option("--engine", engine_names,
                     "engines to run: closed_form, monte_carlo, quadrature");
    eval->add_option("--samples", samples, "Monte Carlo sample count");
    eval->add_option("--seed", seed, "Monte Carlo seed");
    eval->add_option("--workers", workers, "Monte Carlo worker threads");
    eval->add_option("--json", json_path, "also write a JSON report here");

    CLI::App* sweep = app.add_subcommand("sweep", "run a parameter sweep to CSV");
    sweep->add_option("file", file, "sweep file")->required();
    sweep->add_option("--out", out_path, "output CSV path")->required();
    sweep->add_option("--workers", workers, "grid-point worker threads");

    CLI::App* validate = app.add_subcommand("validate", "cross-validate one scenario");
    validate->add_option("file", file, "scenario file")->required();
    validate->add_option("--samples", samples, "Monte Carlo sample count");
    validate->add_option("--seed", seed, "Monte Carlo seed");
    validate->add_option("--workers", workers, "Monte Carlo worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (eval->parsed())
            return run_eval(file, engine_names, samples, seed, workers, json_path);
        if (sweep->parsed()) return run_sweep_cmd(file, out_path, workers);
        if (validate->parsed()) return run_validate(file, samples, seed, workers);
    } catch (const cogrelay::OutsideValidityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidity;
    } catch (const cogrelay::ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const cogrelay::quad::NonConvergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return kExitConfig;
}
