// config.hpp - JSON scenario configuration: parsing and whole-document validation
//
// {
//   "scenario":   "photonic-optimize",
//   "parameters": { "omega_a0": 3, "omega_b0": 1, "delta": 0.2, "nu": 2.828427 },
//   "integrator": { "tol": 1e-10 }          or { "fixed_step": 0.001 },
//   "output":     "out/resonant_optimize",
//   "seed":       7,
//   "plot":       true
// }
//
// Parameters absent from the document take per-scenario defaults.
//
// Every problem found is reported, not only the first one.

#pragma once

#include "qhe/cycle.hpp"
#include "qhe/errors.hpp"
#include "qhe/ode.hpp"
#include "qhe/profile.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace qhe {

class ConfigError : public DomainError {
public:
    explicit ConfigError(std::vector<std::string> errors)
        : DomainError(join(errors)), errors_(std::move(errors)) {}

    const std::vector<std::string>& errors() const noexcept { return errors_; }

private:
    static std::string join(const std::vector<std::string>& errors) {
        std::string out;
        for (const auto& e : errors) out += (out.empty() ? "" : "\n") + e;
        return out;
    }
    std::vector<std::string> errors_;
};

enum class Constraint { positive, non_negative, samples, whole };

struct ParamSpec {
    const char* name;
    std::optional<double> fallback;  // nullopt: required
    Constraint constraint;
};

struct ScenarioConfig {
    std::string scenario;
    std::map<std::string, double> parameters;  // every schema key, defaults filled in
    std::vector<double> omega_b_grid;          // carnot-sweep only, optional
    std::vector<ProfileRow> profile_rows;      // counter-rotating only, optional [t, omega_a, omega_b] rows
    std::string output = "qhe_out";
    std::uint64_t seed = 1;
    ode::Options integrator{};
    bool plot = false;
    nlohmann::json source;  // the document as given, echoed into the manifest

    double operator[](const std::string& key) const { return parameters.at(key); }
};

namespace detail {

inline const std::map<std::string, std::vector<ParamSpec>>& scenario_schemas() {
    using C = Constraint;
    static const std::map<std::string, std::vector<ParamSpec>> schemas = {
        {"rabi",
         {{"omega", 1.0, C::positive}, {"t_end", std::nullopt, C::positive},
          {"q", 0.5, C::positive}, {"p", 1.0, C::positive}, {"samples", 1001, C::samples}}},
        {"three-mode",
         {{"omega", 1.0, C::positive}, {"t_end", 2.0, C::positive}, {"q", 0.5, C::positive},
          {"p", 1.0, C::positive}, {"samples", 1001, C::samples}}},
        {"photonic-cycle",
         {{"omega_a0", 3.0, C::positive}, {"omega_b0", 1.0, C::positive}, {"T_h", 2.0, C::positive},
          {"T_c", 1.0, C::positive}, {"delta", 0.2, C::non_negative}, {"nu", 0.0, C::non_negative},
          {"t_c", std::nullopt, C::non_negative}, {"samples", 2001, C::samples}}},
        {"photonic-optimize",
         {{"omega_a0", 3.0, C::positive}, {"omega_b0", 1.0, C::positive}, {"T_h", 2.0, C::positive},
          {"T_c", 1.0, C::positive}, {"delta", 0.2, C::non_negative}, {"nu", 0.0, C::non_negative},
          {"t_end", 1000.0, C::positive}, {"samples", 2001, C::samples}}},
        {"carnot-sweep",
         {{"omega_a0", 3.0, C::positive}, {"T_h", 2.0, C::positive}, {"T_c", 1.0, C::positive},
          {"delta", 0.2, C::positive}, {"omega_b_min", 0.25, C::positive},
          {"omega_b_max", 2.75, C::positive}, {"points", 21, C::samples},
          {"t_end", 1000.0, C::positive}}},
        {"tls-cycle",
         {{"omega_a0", 3.0, C::positive}, {"omega_b0", 2.0, C::positive}, {"T_h", 2.0, C::positive},
          {"T_c", 1.0, C::positive}, {"delta", 0.2, C::non_negative}, {"nu", 0.0, C::non_negative},
          {"t_c", std::nullopt, C::non_negative}, {"samples", 10001, C::samples}}},
        {"counter-rotating",
         {{"omega_a0", 2.0, C::non_negative}, {"omega_b0", 1.0, C::non_negative},
          {"delta", 0.3, C::non_negative}, {"nu", 2.0, C::positive}, {"n_a0", 0.5, C::non_negative},
          {"n_b0", 0.2, C::non_negative}, {"half_periods", 4, C::whole},
          {"samples", 10001, C::samples}}},
        {"verify", {}},
    };
    return schemas;
}

inline bool is_whole(double v) { return v <= 1e7 && std::floor(v) == v; }

inline void check_constraint(const ParamSpec& spec, double v, std::vector<std::string>& errors) {
    const std::string name = spec.name;
    if (!std::isfinite(v)) {
        errors.push_back("parameters." + name + ": must be a finite number");
        return;
    }
    switch (spec.constraint) {
        case Constraint::positive:
            if (!(v > 0)) errors.push_back("parameters." + name + ": must be > 0, got " + std::to_string(v));
            break;
        case Constraint::non_negative:
            if (!(v >= 0)) errors.push_back("parameters." + name + ": must be >= 0, got " + std::to_string(v));
            break;
        case Constraint::samples:
            if (!(is_whole(v) && v >= 2)) errors.push_back("parameters." + name + ": must be an integer >= 2");
            break;
        case Constraint::whole:
            if (!(is_whole(v) && v >= 1)) errors.push_back("parameters." + name + ": must be an integer >= 1");
            break;
    }
}

// Relations between parameters that the per-key checks cannot see.
inline void check_relations(const ScenarioConfig& c, std::vector<std::string>& errors) {
    const auto& s = c.scenario;
    auto has = [&](const char* k) { return c.parameters.count(k) > 0; };
    if (has("T_h") && has("T_c") && c["T_c"] > 0 && !(c["T_h"] > c["T_c"])) {
        errors.push_back("parameters.T_h: must exceed T_c");
    }
    if ((s == "photonic-cycle" || s == "photonic-optimize" || s == "tls-cycle") &&
        !(c["omega_a0"] > c["omega_b0"])) {
        errors.push_back("parameters.omega_a0: must exceed omega_b0");
    }
    if (!c.profile_rows.empty()) {
        for (const char* k : {"omega_a0", "omega_b0", "delta", "nu", "half_periods"}) {
            if (c.source["parameters"].contains(k)) {
                errors.push_back(std::string("parameters.") + k + ": not allowed together with profile");
            }
        }
        try {
            const auto profile = FrequencyProfile::tabulated(c.profile_rows);
            const auto& last = c.profile_rows.back();
            if (!(profile.omega_a0() == last.omega_a && profile.omega_b0() == last.omega_b)) {
                errors.push_back("parameters.profile: last row must return to the frequencies at t = 0");
            }
            if (!(c.profile_rows.front().t == 0.0 && last.t > 0.0)) {
                errors.push_back("parameters.profile: rows must start at t = 0 and end at the cycle time");
            }
        } catch (const DomainError& e) {
            errors.push_back(std::string("parameters.profile: ") + e.what());
        }
    }
    if (s == "carnot-sweep") {
        if (c.omega_b_grid.empty()) {
            if (!(c["omega_b_min"] < c["omega_b_max"])) {
                errors.push_back("parameters.omega_b_min: must be below omega_b_max");
            }
            if (!(c["omega_b_max"] < c["omega_a0"])) {
                errors.push_back("parameters.omega_b_max: must be below omega_a0");
            }
        }
        for (double w : c.omega_b_grid) {
            if (!(w > 0 && w < c["omega_a0"])) {
                errors.push_back("parameters.omega_b_grid: entries must lie in (0, omega_a0)");
                break;
            }
        }
    }
}

}  // namespace detail

// Parses and validates a configuration document. `source` names it in messages.
inline ScenarioConfig parse_config(const std::string& text, const std::string& source = "config") {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError({source + ": " + e.what()});
    }
    if (!doc.is_object()) throw ConfigError({source + ": top level must be a JSON object"});

    std::vector<std::string> errors;
    ScenarioConfig cfg;
    cfg.source = doc;
    static const std::vector<std::string> top_keys{"scenario", "parameters", "integrator",
                                                   "output",   "seed",       "plot"};
    for (const auto& [key, _] : doc.items()) {
        if (std::find(top_keys.begin(), top_keys.end(), key) == top_keys.end()) {
            errors.push_back("unknown key '" + key + "'");
        }
    }

    const auto& schemas = detail::scenario_schemas();
    const std::vector<ParamSpec>* schema = nullptr;
    if (!doc.contains("scenario") || !doc["scenario"].is_string()) {
        errors.push_back("scenario: required string");
    } else {
        cfg.scenario = doc["scenario"].get<std::string>();
        const auto it = schemas.find(cfg.scenario);
        if (it == schemas.end()) {
            std::string known;
            for (const auto& [name, _] : schemas) known += (known.empty() ? "" : ", ") + name;
            errors.push_back("scenario: unknown '" + cfg.scenario + "' (expected one of " + known + ")");
        } else {
            schema = &it->second;
        }
    }

    if (doc.contains("output")) {
        if (doc["output"].is_string() && !doc["output"].get<std::string>().empty()) {
            cfg.output = doc["output"].get<std::string>();
        } else {
            errors.push_back("output: must be a non-empty string");
        }
    }
    if (doc.contains("seed")) {
        if (doc["seed"].is_number_unsigned()) {
            cfg.seed = doc["seed"].get<std::uint64_t>();
        } else {
            errors.push_back("seed: must be a non-negative integer");
        }
    }
    if (doc.contains("plot")) {
        if (doc["plot"].is_boolean()) {
            cfg.plot = doc["plot"].get<bool>();
        } else {
            errors.push_back("plot: must be true or false");
        }
    }

    if (doc.contains("integrator")) {
        const auto& integ = doc["integrator"];
        if (!integ.is_object()) {
            errors.push_back("integrator: must be an object");
        } else {
            for (const auto& [key, value] : integ.items()) {
                if (key != "tol" && key != "fixed_step") {
                    errors.push_back("integrator: unknown key '" + key + "'");
                } else if (!value.is_number()) {
                    errors.push_back("integrator." + key + ": must be a number");
                }
            }
            if (integ.contains("tol") && integ.contains("fixed_step")) {
                errors.push_back("integrator: give either tol or fixed_step, not both");
            }
            if (integ.contains("tol") && integ["tol"].is_number()) cfg.integrator.tol = integ["tol"].get<double>();
            if (integ.contains("fixed_step") && integ["fixed_step"].is_number()) {
                cfg.integrator.fixed_step = integ["fixed_step"].get<double>();
                if (!(cfg.integrator.fixed_step > 0)) errors.push_back("integrator.fixed_step: must be > 0");
            }
            try {
                // verify reports rejected settings as failed suites instead
                if (cfg.scenario != "verify") cfg.integrator.validate();
            } catch (const DomainError& e) {
                errors.push_back(std::string("integrator: ") + e.what());
            }
        }
    }

    if (doc.contains("parameters") && !doc["parameters"].is_object()) {
        errors.push_back("parameters: must be an object");
    } else if (schema) {
        const nlohmann::json params = doc.value("parameters", nlohmann::json::object());
        for (const auto& [key, value] : params.items()) {
            const bool known = std::any_of(schema->begin(), schema->end(),
                                           [&](const ParamSpec& p) { return key == p.name; });
            if (key == "omega_b_grid" && cfg.scenario == "carnot-sweep") {
                if (!value.is_array() || value.empty()) {
                    errors.push_back("parameters.omega_b_grid: must be a non-empty array of numbers");
                    continue;
                }
                for (const auto& v : value) {
                    if (!v.is_number()) {
                        errors.push_back("parameters.omega_b_grid: must contain only numbers");
                        cfg.omega_b_grid.clear();
                        break;
                    }
                    cfg.omega_b_grid.push_back(v.get<double>());
                }
            } else if (key == "profile" && cfg.scenario == "counter-rotating") {
                bool ok = value.is_array() && value.size() >= 2;
                for (const auto& row : value) {
                    ok = ok && row.is_array() && row.size() == 3 &&
                         std::all_of(row.begin(), row.end(), [](const auto& v) { return v.is_number(); });
                    if (ok) cfg.profile_rows.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
                }
                if (!ok) {
                    errors.push_back("parameters.profile: must be an array of at least two [t, omega_a, omega_b] rows");
                    cfg.profile_rows.clear();
                }
            } else if (!known) {
                errors.push_back("parameters: unknown key '" + key + "' for scenario " + cfg.scenario);
            } else if (!value.is_number()) {
                errors.push_back("parameters." + key + ": must be a number");
            }
        }
        for (const auto& p : *schema) {
            if (params.contains(p.name) && params[p.name].is_number()) {
                cfg.parameters[p.name] = params[p.name].get<double>();
            } else if (p.fallback) {
                cfg.parameters[p.name] = *p.fallback;
            } else {
                if (!params.contains(p.name)) errors.push_back(std::string("parameters.") + p.name + ": required");
                continue;
            }
            detail::check_constraint(p, cfg.parameters[p.name], errors);
        }
        if (errors.empty()) detail::check_relations(cfg, errors);
    }

    if (!errors.empty()) throw ConfigError(std::move(errors));
    return cfg;
}

inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError({path + ": cannot open file"});
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

}  // namespace qhe
