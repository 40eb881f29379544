#include "cogrelay/sweep.hpp"

#include "cogrelay/quad_oracle.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace cogrelay {
namespace {

template <typename T>
T name_to_enum(const std::string& name, std::initializer_list<std::pair<std::string_view, T>> table,
               const char* what) {
    for (const auto& [key, value] : table)
        if (name == key) return value;
    std::ostringstream os;
    os << "unknown " << what << " `" << name << "` (expected one of:";
    for (const auto& [key, value] : table) os << ' ' << key;
    os << ')';
    throw ScenarioError(os.str());
}

Axis axis_from(const std::string& s) {
    return name_to_enum<Axis>(s,
                              {{"p_pt_db", Axis::p_pt_db},
                               {"lambda_p", Axis::lambda_p},
                               {"p_pk_db", Axis::p_pk_db},
                               {"n_relays", Axis::n_relays},
                               {"r_s", Axis::r_s}},
                              "sweep_axis");
}

Engine engine_from(const std::string& s) {
    return name_to_enum<Engine>(s,
                                {{"closed_form", Engine::closed_form},
                                 {"monte_carlo", Engine::monte_carlo},
                                 {"quadrature", Engine::quadrature}},
                                "engine");
}

Curve curve_from(const std::string& s) {
    return name_to_enum<Curve>(
        s, {{"mrc_with_direct", Curve::mrc_with_direct}, {"relay_only", Curve::relay_only}},
        "curve");
}

std::vector<std::string> split_list(const KeyValue& kv) {
    std::vector<std::string> parts;
    std::string current;
    auto flush = [&] {
        const auto b = current.find_first_not_of(" \t");
        if (b == std::string::npos)
            throw ScenarioError("line " + std::to_string(kv.line) + ": key `" + kv.key +
                                "` has an empty list element");
        const auto e = current.find_last_not_of(" \t");
        parts.push_back(current.substr(b, e - b + 1));
        current.clear();
    };
    for (const char ch : kv.value) {
        if (ch == ',')
            flush();
        else
            current += ch;
    }
    flush();
    return parts;
}

std::uint64_t parse_count(const KeyValue& kv) {
    std::uint64_t v = 0;
    const char* begin = kv.value.data();
    const char* end = begin + kv.value.size();
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end)
        throw ScenarioError("line " + std::to_string(kv.line) + ": key `" + kv.key +
                            "` must be a non-negative integer, got \"" + kv.value + "\"");
    return v;
}

void check_axis_value(Axis axis, double v, int line) {
    const auto fail = [&](const std::string& why) {
        throw ScenarioError("line " + std::to_string(line) + ": sweep value " +
                            std::to_string(v) + " invalid: " + why);
    };
    if (!std::isfinite(v)) fail("not finite");
    switch (axis) {
        case Axis::lambda_p:
            if (v <= 0.0 || v >= 1.0) fail("lambda_p must lie in (0, 1)");
            break;
        case Axis::n_relays:
            if (v != std::floor(v) || v < 1.0) fail("n_relays must be a positive integer");
            break;
        case Axis::r_s:
            if (v <= 0.0) fail("r_s must be positive");
            break;
        case Axis::p_pt_db:
        case Axis::p_pk_db:
            break; // any finite dB value is a positive linear power
    }
}

std::string fmt17(double v) {
    // Shortest decimal that parses back to the same double: deterministic,
    // exact, and free of trailing representation noise in the CSV.
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ec == std::errc{} ? ptr : buf);
}

OutageMode to_quad_mode(Curve c) {
    return c == Curve::mrc_with_direct ? OutageMode::mrc_with_direct
                                       : OutageMode::relay_only;
}

CombineMode to_combine(Curve c) {
    return c == Curve::mrc_with_direct ? CombineMode::mrc_with_direct
                                       : CombineMode::relay_only;
}

std::vector<SweepRow> evaluate_point(const SweepSpec& spec, double value) {
    ScenarioParams params = apply_axis(spec.base, spec.axis, value);
    try {
        validate_params(params);
    } catch (const ScenarioError& e) {
        throw ScenarioError("sweep point " + std::string(to_string(spec.axis)) + "=" +
                            fmt17(value) + ": " + e.what());
    }
    const PowerBudget budget = power_budget(params);

    std::optional<ClosedFormResult> cf;
    std::vector<SweepRow> rows;
    for (const Curve curve : spec.curves) {
        for (const Engine engine : spec.engines) {
            SweepRow row;
            row.axis = spec.axis;
            row.axis_value = value;
            row.curve = curve;
            row.engine = engine;
            row.p_st = budget.p_st;
            row.p_sr = budget.p_sr;
            row.st_binding = budget.st_binding;
            row.sr_binding = budget.sr_binding;
            switch (engine) {
                case Engine::closed_form: {
                    if (!cf) cf = secondary_outage_mrc(params, budget);
                    const double v = curve == Curve::mrc_with_direct
                                         ? cf->outage_mrc
                                         : cf->outage_relay_only;
                    if (!std::isnan(v)) row.outage = v;
                    row.validity = cf->validity;
                    break;
                }
                case Engine::quadrature:
                    row.outage =
                        outage_by_quadrature(params, budget, to_quad_mode(curve));
                    break;
                case Engine::monte_carlo: {
                    McConfig mc;
                    mc.samples = spec.mc_samples;
                    mc.seed = spec.mc_seed;
                    mc.combine = to_combine(curve);
                    const OutageEstimate est =
                        estimate_secondary_outage(params, budget, mc, 1);
                    row.outage = est.p_hat;
                    row.ci_low = est.ci_low;
                    row.ci_high = est.ci_high;
                    break;
                }
            }
            rows.push_back(std::move(row));
        }
    }
    const bool any_value =
        std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.outage.has_value(); });
    if (!any_value)
        throw OutsideValidityError("sweep point " + std::string(to_string(spec.axis)) + "=" +
                                   fmt17(value) +
                                   ": closed form outside its validity region and no other "
                                   "engine requested");
    return rows;
}

} // namespace

std::string_view to_string(Axis a) {
    switch (a) {
        case Axis::p_pt_db: return "p_pt_db";
        case Axis::lambda_p: return "lambda_p";
        case Axis::p_pk_db: return "p_pk_db";
        case Axis::n_relays: return "n_relays";
        case Axis::r_s: return "r_s";
    }
    return "?";
}

std::string_view to_string(Engine e) {
    switch (e) {
        case Engine::closed_form: return "closed_form";
        case Engine::monte_carlo: return "monte_carlo";
        case Engine::quadrature: return "quadrature";
    }
    return "?";
}

std::string_view to_string(Curve c) {
    switch (c) {
        case Curve::mrc_with_direct: return "mrc_with_direct";
        case Curve::relay_only: return "relay_only";
    }
    return "?";
}

ScenarioParams apply_axis(const ScenarioParams& base, Axis axis, double value) {
    ScenarioParams p = base;
    switch (axis) {
        case Axis::p_pt_db: p.p_pt = db_to_linear(value); break;
        case Axis::lambda_p: p.lambda_p = value; break;
        case Axis::p_pk_db: p.p_pk = db_to_linear(value); break;
        case Axis::n_relays: p.n_relays = static_cast<int>(value); break;
        case Axis::r_s: p.r_s = value; break;
    }
    return p;
}

SweepSpec parse_sweep(std::string_view text) {
    std::vector<KeyValue> entries = parse_key_values(text);
    SweepSpec spec;

    std::map<std::string, KeyValue> sweep_keys;
    std::vector<KeyValue> scenario_entries;
    for (auto& kv : entries) {
        if (kv.key == "sweep_axis" || kv.key == "sweep_values" || kv.key == "engines" ||
            kv.key == "curves" || kv.key == "mc_samples" || kv.key == "mc_seed")
            sweep_keys.emplace(kv.key, std::move(kv));
        else
            scenario_entries.push_back(std::move(kv));
    }

    const auto it_axis = sweep_keys.find("sweep_axis");
    if (it_axis == sweep_keys.end()) throw ScenarioError("missing required key `sweep_axis`");
    spec.axis = axis_from(it_axis->second.value);

    const auto it_values = sweep_keys.find("sweep_values");
    if (it_values == sweep_keys.end())
        throw ScenarioError("missing required key `sweep_values`");
    for (const std::string& s : split_list(it_values->second)) {
        KeyValue one{it_values->second.key, s, it_values->second.line};
        const double v = parse_number(one);
        check_axis_value(spec.axis, v, it_values->second.line);
        if (!spec.grid.empty() && v <= spec.grid.back())
            throw ScenarioError("line " + std::to_string(it_values->second.line) +
                                ": sweep_values must be strictly increasing");
        spec.grid.push_back(v);
    }

    if (const auto it = sweep_keys.find("engines"); it != sweep_keys.end()) {
        for (const std::string& s : split_list(it->second)) {
            const Engine e = engine_from(s);
            if (std::find(spec.engines.begin(), spec.engines.end(), e) != spec.engines.end())
                throw ScenarioError("line " + std::to_string(it->second.line) +
                                    ": duplicate engine `" + s + "`");
            spec.engines.push_back(e);
        }
    } else {
        spec.engines = {Engine::closed_form};
    }

    if (const auto it = sweep_keys.find("curves"); it != sweep_keys.end()) {
        for (const std::string& s : split_list(it->second)) {
            const Curve c = curve_from(s);
            if (std::find(spec.curves.begin(), spec.curves.end(), c) != spec.curves.end())
                throw ScenarioError("line " + std::to_string(it->second.line) +
                                    ": duplicate curve `" + s + "`");
            spec.curves.push_back(c);
        }
    } else {
        spec.curves = {Curve::mrc_with_direct};
    }

    if (const auto it = sweep_keys.find("mc_samples"); it != sweep_keys.end()) {
        spec.mc_samples = parse_count(it->second);
        if (spec.mc_samples == 0)
            throw ScenarioError("line " + std::to_string(it->second.line) +
                                ": mc_samples must be positive");
    }
    if (const auto it = sweep_keys.find("mc_seed"); it != sweep_keys.end())
        spec.mc_seed = parse_count(it->second);

    spec.base = scenario_from_entries(scenario_entries);
    return spec;
}

SweepSpec load_sweep(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open sweep file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_sweep(buf.str());
    } catch (const ScenarioError& e) {
        throw ScenarioError(path.string() + ": " + e.what());
    }
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, int workers) {
    if (spec.grid.empty()) throw ScenarioError("sweep grid is empty");
    if (spec.engines.empty()) throw ScenarioError("sweep needs at least one engine");
    if (spec.curves.empty()) throw ScenarioError("sweep needs at least one curve");
    validate_params(spec.base);

    const std::size_t points = spec.grid.size();
    std::vector<std::vector<SweepRow>> per_point(points);
    std::vector<std::exception_ptr> errors(points);

    const int n_workers =
        std::clamp<int>(workers, 1, static_cast<int>(points));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next.fetch_add(1); i < points; i = next.fetch_add(1)) {
            try {
                per_point[i] = evaluate_point(spec, spec.grid[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (n_workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    // Report the earliest failing grid point so the error does not depend on
    // scheduling.
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);

    std::vector<SweepRow> rows;
    rows.reserve(points * spec.curves.size() * spec.engines.size());
    for (auto& chunk : per_point)
        for (auto& row : chunk) rows.push_back(std::move(row));
    return rows;
}

std::string to_csv(const std::vector<SweepRow>& rows) {
    std::string out =
        "axis_name,axis_value,curve,engine,outage,ci_low,ci_high,p_st,p_sr,st_binding,"
        "sr_binding,validity\n";
    auto opt17 = [](const std::optional<double>& v) { return v ? fmt17(*v) : std::string{}; };
    for (const SweepRow& r : rows) {
        out += to_string(r.axis);
        out += ',';
        out += fmt17(r.axis_value);
        out += ',';
        out += to_string(r.curve);
        out += ',';
        out += to_string(r.engine);
        out += ',';
        out += opt17(r.outage);
        out += ',';
        out += opt17(r.ci_low);
        out += ',';
        out += opt17(r.ci_high);
        out += ',';
        out += fmt17(r.p_st);
        out += ',';
        out += fmt17(r.p_sr);
        out += ',';
        out += to_string(r.st_binding);
        out += ',';
        out += to_string(r.sr_binding);
        out += ',';
        if (r.validity) out += to_string(*r.validity);
        out += '\n';
    }
    return out;
}

void write_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ScenarioError("cannot open output file " + path.string());
    const std::string csv = to_csv(rows);
    out.write(csv.data(), static_cast<std::streamsize>(csv.size()));
    if (!out) throw ScenarioError("failed writing " + path.string());
}

} // namespace cogrelay
