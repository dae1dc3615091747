// qhe.cpp - Command-line front end
//
//   qhe <scenario> --config <path> [--out <prefix>] [--fixed-step <dt>] [--tol <tol>] [--seed <n>]
//   qhe verify [--seed <n>] [--fixed-step <dt>] [--tol <tol>] [--config <path>] [--out <prefix>]
//
// Exit codes: 0 success, 1 I/O or internal error, 2 configuration error,
// 3 numerical failure (including a failed post-run check or verify suite).

#include "qhe/config.hpp"
#include "qhe/scenario.hpp"
#include "qhe/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <optional>
#include <string>

namespace {

constexpr int kOk = 0;
constexpr int kInternal = 1;
constexpr int kConfig = 2;
constexpr int kNumerical = 3;

struct Overrides {
    std::string config;
    std::string out;
    std::optional<double> fixed_step;
    std::optional<double> tol;
    std::optional<std::uint64_t> seed;
};

// verify takes any tolerance: its suites report settings they reject as failures.
void apply(const Overrides& o, qhe::ScenarioConfig& cfg) {
    if (!o.out.empty()) cfg.output = o.out;
    if (o.seed) cfg.seed = *o.seed;
    if (o.tol) {
        cfg.integrator.tol = *o.tol;
        cfg.integrator.fixed_step = 0.0;
    }
    if (o.fixed_step) {
        if (!(*o.fixed_step > 0.0)) throw qhe::ConfigError({"--fixed-step: must be > 0"});
        cfg.integrator.fixed_step = *o.fixed_step;
    }
    try {
        if (cfg.scenario != "verify") cfg.integrator.validate();
    } catch (const qhe::DomainError& e) {
        throw qhe::ConfigError({std::string("integrator: ") + e.what()});
    }
}

int report_manifest(const qhe::RunManifest& m) {
    for (const auto& c : m.checks) {
        if (!c.passed) {
            std::fprintf(stderr, "qhe: check %s failed: %.6g exceeds %.6g\n", c.name.c_str(), c.value, c.limit);
        }
    }
    std::printf("wrote %zu files, manifest %s\n", m.outputs.size(), m.manifest_path.c_str());
    return m.passed() ? kOk : kNumerical;
}

// Without --out or --config, verify prints its summary and writes nothing.
int run_verify(const Overrides& o) {
    qhe::ScenarioConfig cfg;
    if (!o.config.empty()) {
        cfg = qhe::load_config(o.config);
        if (cfg.scenario != "verify") throw qhe::ConfigError({"scenario: config is for " + cfg.scenario + ", not verify"});
    } else {
        cfg.scenario = "verify";
    }
    apply(o, cfg);
    std::vector<qhe::SuiteResult> results;
    if (!o.out.empty() || !o.config.empty()) {
        if (cfg.source.is_null()) cfg.source = nlohmann::json{{"scenario", "verify"}};
        const auto m = qhe::run_scenario(cfg);
        results = m.suites;
        std::printf("manifest %s\n", m.manifest_path.c_str());
    } else {
        results = qhe::verify_all(cfg.seed, cfg.integrator);
    }
    bool ok = true;
    for (const auto& r : results) {
        std::printf("%-20s %s  worst %.3g of limit  %.2fs%s%s\n", r.name.c_str(), r.passed ? "PASS" : "FAIL",
                    r.worst, r.seconds, r.detail.empty() ? "" : "  ", r.detail.c_str());
        ok = ok && r.passed;
    }
    std::printf("verify seed %llu: %s\n", static_cast<unsigned long long>(cfg.seed),
                ok ? "all suites passed" : "FAILED");
    return ok ? kOk : kNumerical;
}

int run(const std::string& scenario, const Overrides& o) {
    if (scenario == "verify") return run_verify(o);
    auto cfg = qhe::load_config(o.config);
    if (cfg.scenario != scenario) {
        throw qhe::ConfigError({"scenario: config is for " + cfg.scenario + ", not " + scenario});
    }
    apply(o, cfg);
    return report_manifest(qhe::run_scenario(cfg));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum heat engine simulations"};
    app.require_subcommand(1);
    app.set_version_flag("--version", qhe::kVersion);

    Overrides o;
    std::string chosen;
    const std::vector<std::pair<const char*, const char*>> scenarios = {
        {"rabi", "Resonant mode exchange with effective temperatures"},
        {"three-mode", "One oscillator driving two uncoupled modes"},
        {"photonic-cycle", "One engine cycle of fixed duration"},
        {"photonic-optimize", "Find the cycle duration that completes the swap"},
        {"carnot-sweep", "Work and efficiency across cold-oscillator frequencies"},
        {"tls-cycle", "Engine cycle with two-level atoms"},
        {"counter-rotating", "Closed cycle with pair-creation coupling"},
        {"verify", "Run every invariant suite"},
    };
    for (const auto& [name, help] : scenarios) {
        auto* sub = app.add_subcommand(name, help);
        const bool is_verify = std::string(name) == "verify";
        auto* config = sub->add_option("--config", o.config, "JSON configuration file")->check(CLI::ExistingFile);
        if (!is_verify) config->required();
        sub->add_option("--out", o.out, "Output path prefix (overrides the config)");
        sub->add_option("--fixed-step", o.fixed_step, "Use fixed-step RK4 with this step");
        sub->add_option("--tol", o.tol, "Adaptive integrator tolerance");
        sub->add_option("--seed", o.seed, "Seed for randomized suites");
        sub->callback([&chosen, name = std::string(name)] { chosen = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfig;
    }

    try {
        return run(chosen, o);
    } catch (const qhe::ConfigError& e) {
        for (const auto& msg : e.errors()) std::fprintf(stderr, "qhe: config error: %s\n", msg.c_str());
        return kConfig;
    } catch (const qhe::DomainError& e) {
        std::fprintf(stderr, "qhe: invalid parameters: %s\n", e.what());
        return kConfig;
    } catch (const qhe::NumericalError& e) {
        std::fprintf(stderr, "qhe: numerical failure: %s\n", e.what());
        return kNumerical;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "qhe: error: %s\n", e.what());
        return kInternal;
    }
}
