#include "rovib/cli_io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace rovib {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, const std::string& where) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used == v.size() && std::isfinite(x)) return x;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::ParseError, where + ": expected a number, got '" + v + "'");
}

int to_int(const std::string& v, const std::string& where) {
    const double x = to_double(v, where);
    if (x != std::floor(x) || std::abs(x) > 2e9) throw Error(ErrorCode::ParseError, where + ": expected an integer, got '" + v + "'");
    return static_cast<int>(x);
}

bool to_bool(const std::string& v, const std::string& where) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw Error(ErrorCode::ParseError, where + ": expected true/false, got '" + v + "'");
}

// Re-labels library errors raised while interpreting a value as parse errors.
template <class Fn>
auto as_parse_error(const std::string& where, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ParseError) throw;
        throw Error(ErrorCode::ParseError, where + ": " + e.what());
    }
}

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value, const std::string& where) {
    auto& p = cfg.params;
    auto num = [&] { return to_double(value, where); };
    if (key == "mass") p.mass = num();
    else if (key == "mirror_radius") p.mirror_radius = num();
    else if (key == "omega_z") p.omega_z = num();
    else if (key == "omega_phi") p.omega_phi = num();
    else if (key == "Q_z") p.Q_z = num();
    else if (key == "Q_phi") p.Q_phi = num();
    else if (key == "oam_charge") p.oam_charge = to_int(value, where);
    else if (key == "cavity_length") p.cavity_length = num();
    else if (key == "finesse") p.finesse = num();
    else if (key == "wavelength") p.wavelength = num();
    else if (key == "input_power") p.input_power = num();
    else if (key == "detuning_mode") p.detuning_mode = as_parse_error(where, [&] { return detuning_mode_from_string(value); });
    else if (key == "detuning_value") {
        p.detuning_value = num();
        cfg.detuning_explicit = true;
    } else if (key == "temperature") p.temperature = num();
    else if (key == "omega_min") cfg.omega_min = num();
    else if (key == "omega_max") cfg.omega_max = num();
    else if (key == "omega_points") cfg.omega_points = to_int(value, where);
    else if (key == "fine_per_linewidth") cfg.fine_per_linewidth = to_int(value, where);
    else if (key == "axis1" || key == "axis2") {
        const std::size_t slot = key == "axis1" ? 0 : 1;
        const auto axis = as_parse_error(where, [&] { return SweepAxis::parse(value); });
        if (cfg.axes.size() <= slot) cfg.axes.resize(slot + 1);
        cfg.axes[slot] = axis;
    } else if (key == "imbalance_mechanism")
        cfg.imbalance_mechanism = as_parse_error(where, [&] { return imbalance_mechanism_from_string(value); });
    else if (key == "balance_baseline") cfg.balance_baseline = to_bool(value, where);
    else if (key == "tune_window") cfg.tune_window = num();
    else if (key == "output") cfg.output_path = value;
    else if (key == "format") {
        if (value == "csv") cfg.format = OutputFormat::Csv;
        else if (value == "json") cfg.format = OutputFormat::Json;
        else throw Error(ErrorCode::ParseError, where + ": format must be csv or json");
    } else if (key == "timestamp") cfg.timestamp = to_bool(value, where);
    else if (key == "threads") cfg.threads = to_int(value, where);
    else if (key == "deterministic") {
        if (!to_bool(value, where)) throw Error(ErrorCode::ParseError, where + ": deterministic cannot be disabled");
    } else throw Error(ErrorCode::UnknownKey, where + ": unknown key '" + key + "'");
}

struct Assignment {
    std::string key, value, where;
};

std::optional<Assignment> split_line(const std::string& raw, const std::string& where) {
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) return std::nullopt;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::ParseError, where + ": expected key=value");
    Assignment a{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), where};
    if (a.key.empty()) throw Error(ErrorCode::ParseError, where + ": empty key");
    return a;
}

void unit_sanity(RunConfig& cfg) {
    const auto& p = cfg.params;
    if (p.mass >= 1e-3) cfg.warnings.push_back("UnitSanity: mass >= 1 g; mass is read in kg");
    if (p.mirror_radius >= 0.1) cfg.warnings.push_back("UnitSanity: mirror_radius >= 10 cm; lengths are read in m");
    if (p.wavelength >= 1e-5) cfg.warnings.push_back("UnitSanity: wavelength >= 10 um; lengths are read in m");
    if (p.cavity_length >= 1.0) cfg.warnings.push_back("UnitSanity: cavity_length >= 1 m; lengths are read in m");
    if (p.omega_z < 1e3 || p.omega_phi < 1e3) {
        cfg.warnings.push_back("UnitSanity: mechanical frequency below 1e3 rad/s; frequencies are angular (rad/s)");
    }
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string csv_cell(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) return "";
            else if constexpr (std::is_same_v<T, double>) return format_double(v);
            else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
            else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
            else {
                if (v.find_first_of(",\"\n") == std::string::npos) return v;
                std::string q = "\"";
                for (char ch : v) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
                return q + "\"";
            }
        },
        c);
}

nlohmann::ordered_json json_cell(const Cell& c) {
    return std::visit(
        [](const auto& v) -> nlohmann::ordered_json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
            else return v;
        },
        c);
}

nlohmann::ordered_json meta_json(const ResultTable& table, const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["command"] = table.command;
    j["config_hash"] = cfg.hash();
    if (cfg.timestamp) j["timestamp"] = utc_timestamp();
    nlohmann::ordered_json conf = nlohmann::ordered_json::object();
    for (const auto& [k, v] : cfg.resolved()) conf[k] = v;
    j["config"] = conf;
    j["warnings"] = cfg.warnings;
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
    out << text;
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

}  // namespace

const std::vector<std::string>& known_config_keys() {
    static const std::vector<std::string> keys{
        "mass", "mirror_radius", "omega_z", "omega_phi", "Q_z", "Q_phi", "oam_charge", "cavity_length", "finesse",
        "wavelength", "input_power", "detuning_mode", "detuning_value", "temperature", "omega_min", "omega_max",
        "omega_points", "fine_per_linewidth", "axis1", "axis2", "imbalance_mechanism", "balance_baseline",
        "tune_window", "output", "format", "timestamp", "threads", "deterministic"};
    return keys;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::pair<std::string, std::string>> RunConfig::resolved() const {
    const auto& p = params;
    std::vector<std::pair<std::string, std::string>> out{
        {"mass", format_double(p.mass)},
        {"mirror_radius", format_double(p.mirror_radius)},
        {"omega_z", format_double(p.omega_z)},
        {"omega_phi", format_double(p.omega_phi)},
        {"Q_z", format_double(p.Q_z)},
        {"Q_phi", format_double(p.Q_phi)},
        {"oam_charge", std::to_string(p.oam_charge)},
        {"cavity_length", format_double(p.cavity_length)},
        {"finesse", format_double(p.finesse)},
        {"wavelength", format_double(p.wavelength)},
        {"input_power", format_double(p.input_power)},
        {"detuning_mode", to_string(p.detuning_mode)},
        {"detuning_value", format_double(p.detuning_value)},
        {"temperature", format_double(p.temperature)},
        {"omega_min", format_double(grid_lo())},
        {"omega_max", format_double(grid_hi())},
        {"omega_points", std::to_string(omega_points)},
        {"fine_per_linewidth", std::to_string(fine_per_linewidth)},
    };
    for (std::size_t i = 0; i < axes.size(); ++i) out.emplace_back("axis" + std::to_string(i + 1), axes[i].to_string());
    out.emplace_back("imbalance_mechanism", to_string(imbalance_mechanism));
    out.emplace_back("balance_baseline", balance_baseline ? "true" : "false");
    out.emplace_back("tune_window", format_double(tune_window));
    out.emplace_back("deterministic", "true");
    return out;
}

std::string RunConfig::hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (const auto& [k, v] : resolved()) {
        for (char c : k + "=" + v + "\n") {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ULL;
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

SweepSpec RunConfig::sweep_spec() const {
    SweepSpec s;
    s.axes = axes;
    s.baseline = params;
    s.grid.lo_factor = grid_lo() / params.omega_phi;
    s.grid.hi_factor = grid_hi() / params.omega_phi;
    s.grid.coarse_points = omega_points;
    s.grid.fine_per_linewidth = fine_per_linewidth;
    s.imbalance_mechanism = imbalance_mechanism;
    s.balance_baseline = balance_baseline;
    s.tune_window = tune_window;
    s.threads = threads;
    return s;
}

RunConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides) {
    RunConfig cfg;
    std::map<std::string, int> seen;
    bool axis1_given = false;
    std::istringstream in(text);
    int lineno = 0;
    for (std::string line; std::getline(in, line);) {
        ++lineno;
        const std::string where = "line " + std::to_string(lineno);
        const auto a = split_line(line, where);
        if (!a) continue;
        if (auto it = seen.find(a->key); it != seen.end()) {
            cfg.warnings.push_back("duplicate key '" + a->key + "' on line " + std::to_string(lineno) +
                                   " overrides line " + std::to_string(it->second));
        }
        seen[a->key] = lineno;
        axis1_given = axis1_given || a->key == "axis1";
        apply_key(cfg, a->key, a->value, where);
    }
    for (std::size_t i = 0; i < overrides.size(); ++i) {
        const std::string where = "override '" + overrides[i] + "'";
        const auto a = split_line(overrides[i], where);
        if (!a) throw Error(ErrorCode::ParseError, where + ": empty override");
        axis1_given = axis1_given || a->key == "axis1";
        apply_key(cfg, a->key, a->value, where);
    }
    if (cfg.axes.size() == 2 && !axis1_given) throw Error(ErrorCode::ParseError, "axis2 given without axis1");
    if (!cfg.detuning_explicit) cfg.params.detuning_value = cfg.params.omega_phi;
    if (cfg.threads < 1) throw Error(ErrorCode::ParseError, "threads must be >= 1");
    if (cfg.omega_points < 2) throw Error(ErrorCode::ParseError, "omega_points must be >= 2");
    if (!(cfg.grid_lo() < cfg.grid_hi())) throw Error(ErrorCode::ParseError, "omega_min must be below omega_max");
    cfg.params.validate();
    unit_sanity(cfg);
    return cfg;
}

RunConfig parse_config(const std::optional<std::filesystem::path>& file, const std::vector<std::string>& overrides) {
    std::string text;
    if (file) {
        std::ifstream in(*file, std::ios::binary);
        if (!in) throw Error(ErrorCode::IoError, "cannot read config file '" + file->string() + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    return parse_config_text(text, overrides);
}

std::string render_csv(const ResultTable& table, const RunConfig& cfg) {
    std::ostringstream os;
    os << "# " << kToolName << ' ' << kToolVersion << '\n';
    os << "# command: " << table.command << '\n';
    os << "# config_hash: " << cfg.hash() << '\n';
    if (cfg.timestamp) os << "# timestamp: " << utc_timestamp() << '\n';
    for (const auto& [k, v] : cfg.resolved()) os << "# " << k << " = " << v << '\n';
    for (const auto& w : cfg.warnings) os << "# warning: " << w << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
        os << '\n';
    }
    return os.str();
}

std::string render_json(const ResultTable& table, const RunConfig& cfg) {
    auto j = meta_json(table, cfg);
    j["columns"] = table.columns;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) r[table.columns[i]] = json_cell(row[i]);
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    if (!table.summary_json.empty()) j["summary"] = nlohmann::ordered_json::parse(table.summary_json);
    return j.dump(2) + "\n";
}

void emit_results(const ResultTable& table, const RunConfig& cfg) {
    const std::string body = cfg.format == OutputFormat::Json ? render_json(table, cfg) : render_csv(table, cfg);
    if (cfg.output_path.empty()) {
        std::cout << body << std::flush;
        if (!std::cout) throw Error(ErrorCode::IoError, "write to stdout failed");
    } else {
        write_text(cfg.output_path, body);
    }
    if (cfg.format == OutputFormat::Csv && !table.summary_json.empty()) {
        auto j = meta_json(table, cfg);
        j["summary"] = nlohmann::ordered_json::parse(table.summary_json);
        const std::string text = j.dump(2) + "\n";
        if (cfg.output_path.empty()) std::cerr << text;
        else write_text(cfg.output_path + ".summary.json", text);
    }
}

int exit_code_for(ErrorClass kind) noexcept {
    switch (kind) {
        case ErrorClass::Config: return 2;
        case ErrorClass::Numerical: return 3;
        case ErrorClass::Io: return 4;
    }
    return 1;
}

}  // namespace rovib
