#include "cogrelay/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace cogrelay {
namespace {

void check_positive(double v, const char* name) {
    if (!std::isfinite(v) || v <= 0.0)
        throw ScenarioError(std::string(name) + " must be positive and finite, got " +
                            std::to_string(v));
}

} // namespace

void validate_params(const ScenarioParams& p) {
    check_positive(p.omega_pt_pd, "omega_pt_pd");
    check_positive(p.omega_st_pd, "omega_st_pd");
    check_positive(p.omega_sr_pd, "omega_sr_pd");
    check_positive(p.omega_st_sd, "omega_st_sd");
    check_positive(p.omega_pt_sd, "omega_pt_sd");
    check_positive(p.omega_st_sr, "omega_st_sr");
    check_positive(p.omega_pt_sr, "omega_pt_sr");
    check_positive(p.omega_sr_sd, "omega_sr_sd");
    check_positive(p.p_pt, "p_pt");
    check_positive(p.p_pk, "p_pk");
    check_positive(p.n0, "n0");
    check_positive(p.r_p, "r_p");
    check_positive(p.r_s, "r_s");
    if (!std::isfinite(p.lambda_p) || p.lambda_p <= 0.0 || p.lambda_p >= 1.0)
        throw ScenarioError("lambda_p must lie strictly between 0 and 1, got " +
                            std::to_string(p.lambda_p));
    if (p.n_relays < 1)
        throw ScenarioError("n_relays must be at least 1, got " + std::to_string(p.n_relays));
}

Thresholds thresholds(const ScenarioParams& p) {
    return {std::exp2(p.r_p) - 1.0, std::exp2(2.0 * p.r_s) - 1.0};
}

std::string_view to_string(Binding b) {
    switch (b) {
        case Binding::peak: return "peak";
        case Binding::primary_outage: return "primary_outage";
        case Binding::zero: return "zero";
    }
    return "?";
}

double primary_outage_given_power(const ScenarioParams& p, double p_secondary,
                                  double omega_interferer_pd) {
    const double theta_p = thresholds(p).theta_p;
    const double denom = p.omega_pt_pd * p.p_pt;
    const double clear = std::exp(-theta_p * p.n0 / denom);
    return 1.0 - clear / (1.0 + theta_p * omega_interferer_pd * p_secondary / denom);
}

namespace {

PowerLimit max_power_interferer(const ScenarioParams& p, double omega_interferer_pd) {
    const double theta_p = thresholds(p).theta_p;
    const double c = theta_p * p.n0 / (p.omega_pt_pd * p.p_pt);
    const double headroom = std::exp(-c) / (1.0 - p.lambda_p) - 1.0;
    if (headroom <= 0.0) return {0.0, Binding::zero};
    const double p_u =
        (p.p_pt * p.omega_pt_pd / (theta_p * omega_interferer_pd)) * headroom;
    if (p.p_pk <= p_u) return {p.p_pk, Binding::peak};
    return {p_u, Binding::primary_outage};
}

} // namespace

PowerLimit max_power_st(const ScenarioParams& p) {
    validate_params(p);
    return max_power_interferer(p, p.omega_st_pd);
}

PowerLimit max_power_sr(const ScenarioParams& p) {
    validate_params(p);
    return max_power_interferer(p, p.omega_sr_pd);
}

PowerBudget power_budget(const ScenarioParams& p) {
    const PowerLimit st = max_power_st(p);
    const PowerLimit sr = max_power_sr(p);
    return {st.power, sr.power, st.binding, sr.binding};
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

std::vector<KeyValue> parse_key_values(std::string_view text) {
    std::vector<KeyValue> out;
    std::map<std::string, int> seen;
    int line_no = 0;
    std::size_t pos = 0;
    auto trim = [](std::string_view s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string_view::npos) return std::string_view{};
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ScenarioError("line " + std::to_string(line_no) +
                                ": expected `key = value`, got \"" + std::string(line) + "\"");
        const std::string key{trim(line.substr(0, eq))};
        const std::string value{trim(line.substr(eq + 1))};
        if (key.empty() || value.empty())
            throw ScenarioError("line " + std::to_string(line_no) +
                                ": empty key or value in \"" + std::string(line) + "\"");
        if (auto [it, fresh] = seen.emplace(key, line_no); !fresh)
            throw ScenarioError("line " + std::to_string(line_no) + ": duplicate key `" + key +
                                "` (first on line " + std::to_string(it->second) + ")");
        out.push_back({key, value, line_no});
    }
    return out;
}

double parse_number(const KeyValue& kv) {
    double v = 0.0;
    const char* begin = kv.value.data();
    const char* end = begin + kv.value.size();
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end)
        throw ScenarioError("line " + std::to_string(kv.line) + ": key `" + kv.key +
                            "` has a malformed number \"" + kv.value + "\"");
    return v;
}

namespace {

// Consumes entries into a fresh ScenarioParams; every key required exactly
// once, each power through exactly one of its _db/_linear spellings.
ScenarioParams build_scenario(const std::vector<KeyValue>& entries) {
    ScenarioParams p;
    std::map<std::string, const KeyValue*> by_key;
    for (const auto& kv : entries) by_key.emplace(kv.key, &kv);

    auto take = [&](const std::string& key) -> const KeyValue* {
        const auto it = by_key.find(key);
        if (it == by_key.end()) return nullptr;
        const KeyValue* kv = it->second;
        by_key.erase(it);
        return kv;
    };
    auto require_number = [&](const std::string& key) {
        const KeyValue* kv = take(key);
        if (!kv) throw ScenarioError("missing required key `" + key + "`");
        return parse_number(*kv);
    };
    auto require_power = [&](const std::string& stem) {
        const KeyValue* db = take(stem + "_db");
        const KeyValue* lin = take(stem + "_linear");
        if (db && lin)
            throw ScenarioError("give exactly one of `" + stem + "_db` / `" + stem +
                                "_linear`, not both");
        if (db) return db_to_linear(parse_number(*db));
        if (lin) return parse_number(*lin);
        throw ScenarioError("missing power key: one of `" + stem + "_db` / `" + stem +
                            "_linear` is required");
    };

    p.omega_pt_pd = require_number("omega_pt_pd");
    p.omega_st_pd = require_number("omega_st_pd");
    p.omega_sr_pd = require_number("omega_sr_pd");
    p.omega_st_sd = require_number("omega_st_sd");
    p.omega_pt_sd = require_number("omega_pt_sd");
    p.omega_st_sr = require_number("omega_st_sr");
    p.omega_pt_sr = require_number("omega_pt_sr");
    p.omega_sr_sd = require_number("omega_sr_sd");
    p.p_pt = require_power("p_pt");
    p.p_pk = require_power("p_pk");
    p.n0 = require_number("n0");
    p.r_p = require_number("r_p");
    p.r_s = require_number("r_s");
    p.lambda_p = require_number("lambda_p");

    const KeyValue* n = take("n_relays");
    if (!n) throw ScenarioError("missing required key `n_relays`");
    const double n_val = parse_number(*n);
    if (n_val != std::floor(n_val) || n_val < 1.0 || n_val > 1e9)
        throw ScenarioError("line " + std::to_string(n->line) +
                            ": n_relays must be a positive integer, got \"" + n->value + "\"");
    p.n_relays = static_cast<int>(n_val);

    if (!by_key.empty()) {
        std::ostringstream os;
        os << "unknown key";
        if (by_key.size() > 1) os << 's';
        for (const auto& [key, kv] : by_key) os << " `" << key << "` (line " << kv->line << ")";
        throw ScenarioError(os.str());
    }
    validate_params(p);
    return p;
}

} // namespace

ScenarioParams scenario_from_entries(const std::vector<KeyValue>& entries) {
    return build_scenario(entries);
}

ScenarioParams parse_scenario(std::string_view text) {
    return build_scenario(parse_key_values(text));
}

ScenarioParams load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open scenario file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_scenario(buf.str());
    } catch (const ScenarioError& e) {
        throw ScenarioError(path.string() + ": " + e.what());
    }
}

} // namespace cogrelay
