#include "qhe/config.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <string>

namespace {

using qhe::ConfigError;
using qhe::parse_config;

// Runs the parser and returns every error message joined, or "" when valid.
std::string errors_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

TEST(Config, MinimalRabiIsValid) {
    const auto cfg = parse_config(R"({"scenario": "rabi", "parameters": {"omega": 1, "t_end": 6.2832}})");
    EXPECT_EQ(cfg.scenario, "rabi");
    EXPECT_EQ(cfg["omega"], 1.0);
    EXPECT_EQ(cfg["t_end"], 6.2832);
    EXPECT_EQ(cfg["samples"], 1001.0);  // default
    EXPECT_FALSE(cfg.integrator.is_fixed());
}

TEST(Config, NegativeHotTemperatureNamesTheParameter) {
    const auto msg = errors_of(R"({"scenario": "photonic-cycle", "parameters": {"T_h": -1, "t_c": 3}})");
    EXPECT_NE(msg.find("T_h"), std::string::npos) << msg;
    EXPECT_NE(errors_of(R"({"scenario": "tls-cycle", "parameters": {"T_h": 0.5, "T_c": 1, "t_c": 3}})").find("T_h"),
              std::string::npos);
}

TEST(Config, ResonantDriveParametersRouteToOptimizer) {
    const auto cfg = parse_config(R"({
        "scenario": "photonic-optimize",
        "parameters": {"omega_a0": 3, "omega_b0": 1, "delta": 0.2, "nu": 2.828427}
    })");
    EXPECT_EQ(cfg.scenario, "photonic-optimize");
    EXPECT_EQ(cfg["omega_a0"] - cfg["omega_b0"], 2.0);
    EXPECT_EQ(cfg["delta"], 0.2);
}

TEST(Config, ReportsEveryErrorNotJustTheFirst) {
    try {
        parse_config(R"({"scenario": "photonic-cycle", "colour": 1,
                         "parameters": {"T_h": -1, "bogus": 2, "delta": "big"},
                         "integrator": {"tol": 1e-3, "fixed_step": 0.1}})");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        const std::string all = e.what();
        EXPECT_GE(e.errors().size(), 5u) << all;
        for (const char* needle : {"colour", "bogus", "delta", "T_h", "t_c", "fixed_step"}) {
            EXPECT_NE(all.find(needle), std::string::npos) << needle << " missing from:\n" << all;
        }
    }
}

TEST(Config, ParseErrorCarriesLineAndColumn) {
    const auto msg = errors_of("{\n  \"scenario\": \"rabi\",\n  \"parameters\": {\"omega\": 1,}\n}");
    EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("column"), std::string::npos) << msg;
    EXPECT_NE(errors_of("[1, 2]").find("object"), std::string::npos);
}

TEST(Config, UnknownScenarioAndMissingRequired) {
    EXPECT_NE(errors_of(R"({"scenario": "warp-drive"})").find("warp-drive"), std::string::npos);
    EXPECT_NE(errors_of(R"({"parameters": {}})").find("scenario"), std::string::npos);
    EXPECT_NE(errors_of(R"({"scenario": "rabi"})").find("t_end"), std::string::npos);
}

TEST(Config, IntegratorAndTopLevelFields) {
    const auto fixed = parse_config(R"({"scenario": "rabi", "parameters": {"t_end": 1},
                                        "integrator": {"fixed_step": 0.001}, "seed": 9,
                                        "output": "a/b", "plot": true})");
    EXPECT_TRUE(fixed.integrator.is_fixed());
    EXPECT_EQ(fixed.seed, 9u);
    EXPECT_EQ(fixed.output, "a/b");
    EXPECT_TRUE(fixed.plot);
    EXPECT_NE(errors_of(R"({"scenario": "rabi", "parameters": {"t_end": 1}, "integrator": {"tol": 5}})")
                  .find("tol"), std::string::npos);
    EXPECT_NE(errors_of(R"({"scenario": "rabi", "parameters": {"t_end": 1}, "seed": -3})").find("seed"),
              std::string::npos);
    EXPECT_NE(errors_of(R"({"scenario": "rabi", "parameters": {"t_end": 1, "samples": 2.5}})").find("samples"),
              std::string::npos);
}

TEST(Config, CrossParameterRelations) {
    EXPECT_NE(errors_of(R"({"scenario": "photonic-optimize", "parameters": {"omega_a0": 1, "omega_b0": 2}})")
                  .find("omega_a0"), std::string::npos);
    EXPECT_NE(errors_of(R"({"scenario": "carnot-sweep", "parameters": {"omega_b_max": 4}})").find("omega_b_max"),
              std::string::npos);
    const auto grid = parse_config(R"({"scenario": "carnot-sweep", "parameters": {"omega_b_grid": [0.5, 1.5]}})");
    EXPECT_EQ(grid.omega_b_grid.size(), 2u);
    EXPECT_NE(errors_of(R"({"scenario": "carnot-sweep", "parameters": {"omega_b_grid": [0.5, 3.5]}})")
                  .find("omega_b_grid"), std::string::npos);
}

TEST(Config, TabulatedCounterRotatingProfile) {
    const auto ok = parse_config(R"({"scenario": "counter-rotating",
                                     "parameters": {"profile": [[0, 2, 1], [1, 3, 0], [2, 2, 1]]}})");
    EXPECT_EQ(ok.profile_rows.size(), 3u);
    EXPECT_NE(errors_of(R"({"scenario": "counter-rotating", "parameters": {"profile": [[0, 2, 1], [1, 3, 0]]}})")
                  .find("return"), std::string::npos);
    EXPECT_NE(errors_of(R"({"scenario": "counter-rotating",
                            "parameters": {"nu": 2, "profile": [[0, 2, 1], [1, 2, 1]]}})").find("nu"),
              std::string::npos);
    EXPECT_NE(errors_of(R"({"scenario": "counter-rotating", "parameters": {"profile": [[0, 2], [1, 2, 1]]}})")
                  .find("profile"), std::string::npos);
}

TEST(Config, MissingFileAndShippedConfigs) {
    EXPECT_THROW(qhe::load_config("/nonexistent/qhe.json"), ConfigError);
    int seen = 0;
    for (const auto& entry : std::filesystem::directory_iterator(QHE_CONFIG_DIR)) {
        if (entry.path().extension() != ".json") continue;
        EXPECT_NO_THROW(qhe::load_config(entry.path().string())) << entry.path();
        ++seen;
    }
    EXPECT_GE(seen, 8);
}

}  // namespace
