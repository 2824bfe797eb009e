#pragma once

// Experiment runner behind the command-line tool.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "hexconf/field.hpp"
#include "hexconf/fan.hpp"

namespace hexconf {

inline constexpr std::string_view kVersion = "0.1.0";

enum class Command {
    fan_check,
    fan_solve,
    fan_sample,
    calculus_fdcheck,
    maxprin_flow,
    maxprin_verify,
    maxprin_search,
    harmonic_weights,
    harmonic_estimate,
    harmonic_window,
    plane_layout,
    plane_overlap,
    plane_linear,
    hyp_lcr,
    hyp_shear,
    hyp_dihedral,
    hyp_reduce,
};

/// "fan check", "maxprin search", ...
[[nodiscard]] std::string_view to_string(Command c) noexcept;
[[nodiscard]] bool is_randomized(Command c) noexcept;

struct ExperimentConfig {
    Command command = Command::fan_check;
    std::optional<std::uint64_t> seed;
    std::uint64_t trials = 1000;
    double tolerance = 1e-9;
    int radius = 5;
    int n = 6;
    /// Boundary index for fan solve.
    int j = 1;
    double target = 0.0;
    double M = 0.0;
    double N = 0.0;
    int rmax = 40;
    double eps = 0.1;
    std::vector<double> eps_grid;
    /// Input vector for harmonic weights.
    std::vector<double> values;
    /// Fan or field file; `file2` is the lower fan for maxprin verify.
    std::optional<std::string> file;
    std::optional<std::string> file2;
    std::optional<std::string> output;
    std::optional<std::string> svg;
};

struct RunResult {
    /// 0 success, 1 anomaly.
    int exit_code = 0;
    nlohmann::json report;
    std::optional<std::string> svg;
};

/// Throws invalid_config for missing or out-of-range parameters.
void validate(const ExperimentConfig& config);

/// Runs one experiment and writes the report (and SVG) to the configured paths.
/// Library errors raised by bad inputs propagate as hexconf::Error.
[[nodiscard]] RunResult run(const ExperimentConfig& config);

/// The report as written: two-space indent, trailing newline.
[[nodiscard]] std::string dump_report(const nlohmann::json& report);

[[nodiscard]] nlohmann::json config_to_json(const ExperimentConfig& config);

/// {"n": int, "u": [...], "u0_normalized": bool}; u holds u_0..u_n, or u_1..u_n with u_0 = 0.
[[nodiscard]] FanConfiguration fan_from_json(const nlohmann::json& j);
[[nodiscard]] nlohmann::json fan_to_json(const FanConfiguration& fan);

/// {"radius": R, "factors": [{"m", "n", "u"}]} on B(0, R); every vertex of the ball required.
[[nodiscard]] ConformalField field_from_json(const nlohmann::json& j);
[[nodiscard]] nlohmann::json field_to_json(const ConformalField& field);

[[nodiscard]] nlohmann::json read_json_file(const std::string& path);

}  // namespace hexconf
