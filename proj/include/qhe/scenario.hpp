// scenario.hpp - Runs a validated ScenarioConfig and writes its artifacts
//
// <prefix>_trajectory.csv   time series (absent for carnot-sweep)
// <prefix>_report.csv       per-cycle or per-sweep-point results
// <prefix>.gp               gnuplot script, when plot is set
// <prefix>_manifest.json    written last; lists the files above and the checks

#pragma once

#include "qhe/config.hpp"
#include "qhe/counter_rotating.hpp"
#include "qhe/observables.hpp"
#include "qhe/photonic_engine.hpp"
#include "qhe/three_mode.hpp"
#include "qhe/tls_engine.hpp"
#include "qhe/verify.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

namespace qhe {

inline constexpr const char* kVersion = "0.1.0";

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double limit = 0.0;
};

struct RunManifest {
    std::string scenario;
    std::vector<std::string> outputs;
    std::vector<CheckResult> checks;
    std::vector<SuiteResult> suites;  // verify only
    double wall_time = 0.0;
    std::string manifest_path;

    bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
    }
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

// Columns of doubles, printed with 17 significant digits, optionally led by a
// text label column.
struct Table {
    explicit Table(std::vector<std::string> h, std::vector<std::vector<double>> r = {})
        : header(std::move(h)), rows(std::move(r)) {}

    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> labels;

    void add(std::vector<double> row) { rows.push_back(std::move(row)); }
};

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    out.close();
    if (!out) throw IoError("cannot write " + path);
}

inline std::string to_csv(const Table& table) {
    std::string out;
    for (std::size_t i = 0; i < table.header.size(); ++i) out += (i ? "," : "") + table.header[i];
    out += '\n';
    char buf[32];
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (!table.labels.empty()) out += table.labels[r];
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.16e", row[i]);
            if (i || !table.labels.empty()) out += ',';
            out += buf;
        }
        out += '\n';
    }
    return out;
}

struct Artifacts {
    std::string prefix;
    RunManifest manifest;

    void csv(const std::string& suffix, const Table& table) {
        const std::string path = prefix + suffix;
        write_text(path, to_csv(table));
        manifest.outputs.push_back(path);
    }
    void check(std::string name, double value, double limit) {
        manifest.checks.push_back({std::move(name), value <= limit, value, limit});
    }
    void require(std::string name, bool ok) { check(std::move(name), ok ? 0.0 : 1.0, 0.0); }
};

// Uniform samples on [0, t_end] with `extra` times merged in.
inline std::vector<double> sample_grid(double t_end, double samples, std::vector<double> extra = {}) {
    auto grid = uniform_grid(t_end, static_cast<std::size_t>(samples));
    for (double t : extra) {
        if (t > 0.0 && t < t_end) grid.push_back(t);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

inline double report_tolerance(const ode::Options& integ) {
    return std::max(1e-8, 100.0 * (integ.is_fixed() ? 1e-10 : integ.tol));
}

inline const std::vector<std::string>& report_header() {
    static const std::vector<std::string> h{"t_c", "W", "W_alt", "Q", "eta", "eta_carnot", "d_sq",
                                            "n_a_initial", "n_b_initial", "n_a_final", "n_b_final",
                                            "frequency_offset", "zero_heat"};
    return h;
}

inline std::vector<double> report_row(const EngineReport& r) {
    return {r.t_c, r.W, r.W_alt, r.Q, r.eta, r.eta_carnot, r.d_sq, r.n_a_initial, r.n_b_initial,
            r.n_a_final, r.n_b_final, r.frequency_offset, r.zero_heat ? 1.0 : 0.0};
}

inline CycleSpec cycle_spec(const ScenarioConfig& c) {
    CycleSpec s;
    s.omega_a0 = c["omega_a0"];
    s.omega_b0 = c["omega_b0"];
    s.T_h = c["T_h"];
    s.T_c = c["T_c"];
    s.delta = c["delta"];
    // nu = 0 selects the parametric resonance
    s.nu = c["nu"] > 0.0 ? c["nu"] : resonance_frequency(s.omega_a0, s.omega_b0);
    if (c.parameters.count("t_end")) s.t_end = c["t_end"];
    s.integrator = c.integrator;
    return s;
}

// Engine laws shared by the photonic and two-level reports.
inline void check_engine(Artifacts& a, const CycleSpec& s, const EngineReport& r, bool photonic) {
    const double tol = report_tolerance(s.integrator);
    a.check("work_routes_agree", std::abs(r.W - r.W_alt), tol);
    if (!r.zero_heat) a.check("efficiency_law", std::abs(r.eta - (1.0 - s.omega_b0 / s.omega_a0)), 1e-10);
    if (r.W > 0.0) a.check("carnot_ceiling", r.eta - r.eta_carnot, 1e-12);
    const double forward = photonic ? s.p() - s.q() : r.n_a_initial - r.n_b_initial;
    if (forward > 0.0) a.check("work_non_negative", -r.W, tol);
    if (forward < 0.0) a.check("work_non_positive", r.W, tol);
}

inline Table mode_table(const FrequencyProfile& profile, const ThermalInit& init, double t_end,
                        std::vector<double> times, const ode::Options& integ) {
    EvolveOptions opts;
    opts.integrator = integ;
    opts.output_times = std::move(times);
    const auto traj = evolve_modes(profile, t_end, opts);
    const auto occ = occupations_from_modes(traj, init);
    Table t{{"t", "omega_a", "omega_b", "abs_C", "abs_D", "n_a", "n_b", "unitarity_residual"}, {}};
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto w = profile.at(traj.times[i]);
        const auto& m = traj.samples[i];
        t.add({traj.times[i], w.a, w.b, std::abs(m.C), std::abs(m.D), occ.n_a[i], occ.n_b[i],
               unitarity_residual(m).max()});
    }
    return t;
}

inline std::size_t column(const Table& t, const std::string& name) {
    return static_cast<std::size_t>(std::find(t.header.begin(), t.header.end(), name) - t.header.begin());
}

inline double column_max(const Table& t, const std::string& name) {
    const auto k = column(t, name);
    double m = 0.0;
    for (const auto& row : t.rows) m = std::max(m, row[k]);
    return m;
}

inline void run_rabi(const ScenarioConfig& c, Artifacts& a) {
    const double omega = c["omega"], t_end = c["t_end"];
    const ThermalInit init{c["q"], c["p"]};
    const double swap = std::numbers::pi / 2.0;
    const auto profile = FrequencyProfile::constant(omega, omega);
    Table t = mode_table(profile, init, t_end, sample_grid(t_end, c["samples"], {swap}), c.integrator);
    t.header.push_back("T_a_eff");
    t.header.push_back("T_b_eff");
    const auto n_a = column(t, "n_a"), n_b = column(t, "n_b");
    for (auto& row : t.rows) {
        row.push_back(effective_temperature(omega * row[n_a], omega));
        row.push_back(effective_temperature(omega * row[n_b], omega));
    }
    a.csv("_trajectory.csv", t);
    const double tol = report_tolerance(c.integrator);
    a.check("unitarity", column_max(t, "unitarity_residual"), tol);
    if (t_end >= swap) {
        const auto row = std::find_if(t.rows.begin(), t.rows.end(), [&](const auto& r) { return r[0] == swap; });
        if (row != t.rows.end()) a.check("swap_at_half_pi", std::abs((*row)[n_a] - bose_occupation(init.p)), tol);
    }
}

inline void run_three_mode(const ScenarioConfig& c, Artifacts& a) {
    const double t_end = c["t_end"], q = c["q"], p = c["p"];
    const double swap = three_mode_swap_time();
    EvolveOptions opts;
    opts.integrator = c.integrator;
    opts.output_times = sample_grid(t_end, c["samples"], {swap});
    const auto states = simulate_three_mode(q, p, t_end, opts, c["omega"]);
    Table t{{"t", "n_a", "n_B1", "n_B2", "coherence_re", "coherence_im"}, {}};
    double drift = 0.0;
    for (const auto& s : states) {
        t.add({s.t, s.n_a, s.n_B1, s.n_B2, s.coherence_bc.real(), s.coherence_bc.imag()});
        drift = std::max(drift, std::abs(s.n_B2 - bose_occupation(p)));
    }
    a.csv("_trajectory.csv", t);
    a.check("antisymmetric_mode_drift", drift, 1e-9);
    for (const auto& s : states) {
        if (s.t == swap) {
            const double expected = 0.5 * (bose_occupation(q) - bose_occupation(p));
            a.check("coherence_at_swap", std::abs(s.coherence_bc - complex(expected, 0.0)), 1e-6);
        }
    }
}

inline void write_cycle(const ScenarioConfig& c, Artifacts& a, const CycleSpec& s, const EngineReport& r,
                        double trajectory_end, std::vector<std::string> extra_header = {},
                        std::vector<double> extra_values = {}) {
    if (trajectory_end > 0.0) {
        a.csv("_trajectory.csv", mode_table(s.profile(), ThermalInit{s.q(), s.p()}, trajectory_end,
                                            sample_grid(trajectory_end, c["samples"], {r.t_c}), s.integrator));
    }
    Table report{report_header(), {report_row(r)}};
    report.header.insert(report.header.end(), extra_header.begin(), extra_header.end());
    report.rows[0].insert(report.rows[0].end(), extra_values.begin(), extra_values.end());
    a.csv("_report.csv", report);
    check_engine(a, s, r, true);
}

inline void run_photonic_cycle_scenario(const ScenarioConfig& c, Artifacts& a) {
    const auto s = cycle_spec(c);
    s.validate();
    const auto r = run_photonic_cycle(s, c["t_c"]);
    write_cycle(c, a, s, r, r.t_c);
}

inline void run_photonic_optimize(const ScenarioConfig& c, Artifacts& a) {
    const auto s = cycle_spec(c);
    const auto opt = optimize_cycle_duration(s);
    const auto r = run_photonic_cycle(s, opt.t_c);
    // Show the envelope on both sides of the chosen zero.
    write_cycle(c, a, s, r, std::min(s.t_end, 2.0 * opt.t_c), {"abs_C", "estimate", "window_lo", "window_hi"},
                {opt.abs_C, opt.estimate, opt.window_lo, opt.window_hi});
}

inline void run_carnot_sweep(const ScenarioConfig& c, Artifacts& a) {
    SweepSpec sweep;
    sweep.omega_a0 = c["omega_a0"];
    sweep.T_h = c["T_h"];
    sweep.T_c = c["T_c"];
    sweep.delta = c["delta"];
    sweep.t_end = c["t_end"];
    sweep.integrator = c.integrator;
    std::vector<double> grid = c.omega_b_grid;
    if (grid.empty()) {
        const auto n = static_cast<std::size_t>(c["points"]);
        for (std::size_t i = 0; i < n; ++i) {
            grid.push_back(c["omega_b_min"] + (c["omega_b_max"] - c["omega_b_min"]) * i / (n - 1));
        }
    }
    const auto result = carnot_sweep(sweep, grid);
    Table t{{"omega_b", "q", "p", "W", "eta", "eta_carnot", "t_c", "d_sq"}, {}};
    double excess = -INFINITY;
    for (const auto& row : result.rows) {
        t.add({row.omega_b, row.q, row.p, row.W, row.eta, result.eta_carnot, row.t_c, row.d_sq});
        if (row.W > 0.0) excess = std::max(excess, row.eta - result.eta_carnot);
    }
    a.csv("_report.csv", t);
    if (excess > -INFINITY) a.check("carnot_ceiling", excess, 1e-12);
    if (result.sign_change) a.require("sign_change_at_boundary", result.sign_change_brackets_boundary);
}

inline void run_tls_cycle_scenario(const ScenarioConfig& c, Artifacts& a) {
    const auto s = cycle_spec(c);
    const auto r = run_tls_cycle(s, c["t_c"]);
    if (r.t_c > 0.0) {
        EvolveOptions opts;
        opts.integrator = s.integrator;
        opts.output_times = sample_grid(r.t_c, c["samples"]);
        const auto traj = evolve_two_qubits(s.profile(), s.T_h, s.T_c, r.t_c, opts);
        Table t{{"t", "omega_a", "omega_b", "n_a", "n_b"}, {}};
        for (const auto& st : traj.states) {
            const auto w = s.profile().at(st.t);
            t.add({st.t, w.a, w.b, st.n_a, st.n_b});
        }
        // The identity residual needs a grid that resolves the exchange oscillation.
        try {
            const auto id = verify_atom_identity(traj);
            t.header.insert(t.header.end(), {"identity_lhs", "identity_rhs", "identity_residual"});
            for (std::size_t i = 0; i < t.rows.size(); ++i) {
                t.rows[i].insert(t.rows[i].end(), {id.lhs[i], id.rhs[i], id.residual[i]});
            }
        } catch (const ResolutionError&) {
        }
        a.csv("_trajectory.csv", t);
    }
    a.csv("_report.csv", Table{report_header(), {report_row(r)}});
    check_engine(a, s, r, false);
}

inline void run_counter_rotating(const ScenarioConfig& c, Artifacts& a) {
    const bool tabulated = !c.profile_rows.empty();
    const auto profile = tabulated ? FrequencyProfile::tabulated(c.profile_rows)
                                   : FrequencyProfile::sinusoidal(c["omega_a0"], c["omega_b0"], c["delta"], c["nu"]);
    // A sinusoidal drive is back at its starting frequencies every half period.
    const double t_c = tabulated ? c.profile_rows.back().t : c["half_periods"] * std::numbers::pi / c["nu"];
    const double na0 = c["n_a0"], nb0 = c["n_b0"];
    EvolveOptions opts;
    opts.integrator = c.integrator;
    opts.output_times = sample_grid(t_c, c["samples"]);
    const auto r = run_cr_cycle(profile, na0, nb0, t_c, opts);
    const auto traj = evolve_cr_moments(profile, na0, nb0, t_c, opts);

    Table t{{"t", "omega_a", "omega_b", "n_a", "n_b", "m_re", "m_im"}, {}};
    double drift = 0.0, dip = 0.0;
    for (const auto& s : traj.states) {
        const auto w = profile.at(s.t);
        t.add({s.t, w.a, w.b, s.n_a, s.n_b, s.m.real(), s.m.imag()});
        drift = std::max(drift, std::abs((s.n_a - s.n_b) - (na0 - nb0)));
        dip = std::max(dip, (na0 + nb0) - (s.n_a + s.n_b));
    }
    try {
        const auto id = verify_sum_identity(traj);
        t.header.insert(t.header.end(), {"identity_lhs", "identity_rhs", "identity_residual"});
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            t.rows[i].insert(t.rows[i].end(), {id.lhs[i], id.rhs[i], id.residual[i]});
        }
    } catch (const ResolutionError&) {
    }
    a.csv("_trajectory.csv", t);
    a.csv("_report.csv", Table{report_header(), {report_row(r)}});
    a.check("no_positive_work", r.W, 1e-9);
    a.check("difference_conserved", drift, 1e-9);
    a.check("sum_floor", dip, 1e-9);
}

inline void run_verify(const ScenarioConfig& c, Artifacts& a) {
    Table t{{"suite", "passed", "worst_fraction_of_limit", "seconds"}, {}};
    a.manifest.suites = verify_all(c.seed, c.integrator);
    for (const auto& r : a.manifest.suites) {
        t.labels.push_back(r.name);
        t.add({r.passed ? 1.0 : 0.0, r.worst, r.seconds});
        a.check("verify_" + r.name, r.worst, 1.0);
    }
    a.csv("_report.csv", t);
}

inline std::string gnuplot_script(const std::string& scenario, const std::vector<std::string>& outputs) {
    std::string s = "set datafile separator ','\nset key autotitle columnhead\nset grid\n";
    for (const auto& path : outputs) {
        const auto name = std::filesystem::path(path).filename().string();
        if (scenario == "carnot-sweep") {
            s += "set xlabel 'omega_b'\nplot '" + name + "' using 1:4 with linespoints, '' using 1:5 with linespoints\n";
        } else if (name.ends_with("_trajectory.csv")) {
            s += "set xlabel 't'\nplot for [i=2:*] '" + name + "' using 1:i with lines\n";
        }
    }
    return s;
}

}  // namespace detail

// Output prefixes name files relative to the working directory; missing
// parent directories are created.
inline RunManifest run_scenario(const ScenarioConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    detail::Artifacts a;
    a.prefix = config.output;
    a.manifest.scenario = config.scenario;
    const auto parent = std::filesystem::path(config.output).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);

    const auto& s = config.scenario;
    if (s == "rabi") detail::run_rabi(config, a);
    else if (s == "three-mode") detail::run_three_mode(config, a);
    else if (s == "photonic-cycle") detail::run_photonic_cycle_scenario(config, a);
    else if (s == "photonic-optimize") detail::run_photonic_optimize(config, a);
    else if (s == "carnot-sweep") detail::run_carnot_sweep(config, a);
    else if (s == "tls-cycle") detail::run_tls_cycle_scenario(config, a);
    else if (s == "counter-rotating") detail::run_counter_rotating(config, a);
    else if (s == "verify") detail::run_verify(config, a);
    else throw DomainError("unknown scenario " + s);

    if (config.plot) {
        const std::string path = config.output + ".gp";
        detail::write_text(path, detail::gnuplot_script(s, a.manifest.outputs));
        a.manifest.outputs.push_back(path);
    }

    auto& m = a.manifest;
    m.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : m.checks) {
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"limit", c.limit}});
    }
    nlohmann::json integrator = config.integrator.is_fixed()
                                    ? nlohmann::json{{"fixed_step", config.integrator.fixed_step}}
                                    : nlohmann::json{{"tol", config.integrator.tol}};
    const nlohmann::json doc = {
        {"tool", "qhe"},
        {"version", kVersion},
        {"scenario", s},
        {"config", config.source},
        {"effective", {{"output", config.output}, {"seed", config.seed}, {"integrator", integrator}}},
        {"wall_time_s", m.wall_time},
        {"outputs", m.outputs},
        {"checks", checks},
        {"passed", m.passed()},
    };
    m.manifest_path = config.output + "_manifest.json";
    detail::write_text(m.manifest_path, doc.dump(2) + "\n");
    return m;
}

}  // namespace qhe
