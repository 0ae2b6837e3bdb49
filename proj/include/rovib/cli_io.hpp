#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rovib/errors.hpp"
#include "rovib/model_params.hpp"
#include "rovib/sweeps.hpp"

namespace rovib {

inline constexpr const char* kToolName = "rovib";
inline constexpr const char* kToolVersion = "0.1.0";

enum class OutputFormat { Csv, Json };

struct RunConfig {
    PhysicalParams params;
    bool detuning_explicit = false;  // otherwise detuning_value tracks omega_phi

    std::optional<double> omega_min;  // default 0.95 omega_phi
    std::optional<double> omega_max;  // default 1.05 omega_phi
    int omega_points = 400;
    int fine_per_linewidth = 40;

    std::vector<SweepAxis> axes;
    ImbalanceMechanism imbalance_mechanism = ImbalanceMechanism::OmegaPhi;
    bool balance_baseline = true;
    double tune_window = 5e-9;

    std::string output_path;  // empty: stdout
    OutputFormat format = OutputFormat::Csv;
    bool timestamp = true;
    int threads = 1;
    // Results never depend on random state; kept for forward compatibility.
    bool deterministic = true;

    std::vector<std::string> warnings;

    // Canonical key/value listing of every computational setting, in a
    // fixed order. Output destination and thread count are excluded.
    std::vector<std::pair<std::string, std::string>> resolved() const;
    // FNV-1a 64 over resolved(), as 16 hex digits.
    std::string hash() const;

    double grid_lo() const { return omega_min.value_or(0.95 * params.omega_phi); }
    double grid_hi() const { return omega_max.value_or(1.05 * params.omega_phi); }
    SweepSpec sweep_spec() const;
};

// Every key accepted in a config file or as a key=value override.
const std::vector<std::string>& known_config_keys();

// key=value lines, '#' comments. Overrides ("key=value") are applied after
// the file. Throws ParseError (with line number) or UnknownKey.
RunConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides = {});
RunConfig parse_config(const std::optional<std::filesystem::path>& file, const std::vector<std::string>& overrides = {});

// Shortest-exact text for a double: 17 significant digits.
std::string format_double(double v);

using Cell = std::variant<std::monostate, double, long long, bool, std::string>;

struct ResultTable {
    std::string command;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::string summary_json;  // optional, serialized JSON object
};

std::string render_csv(const ResultTable& table, const RunConfig& cfg);
std::string render_json(const ResultTable& table, const RunConfig& cfg);

// Writes to cfg.output_path (stdout when empty) in cfg.format. For CSV with
// a summary, the summary goes to <output>.summary.json (stderr on stdout).
void emit_results(const ResultTable& table, const RunConfig& cfg);

// Exit code for a failure class: 2 config, 3 numerical, 4 I/O.
int exit_code_for(ErrorClass kind) noexcept;

}  // namespace rovib
