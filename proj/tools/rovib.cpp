// Command-line front end: derive, steady, stability, spectrum, sweep, tune.
#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rovib/cli_io.hpp"
#include "rovib/errors.hpp"
#include "rovib/linear_dynamics.hpp"
#include "rovib/model_params.hpp"
#include "rovib/oracles.hpp"
#include "rovib/spectra.hpp"
#include "rovib/steady_state.hpp"
#include "rovib/sweeps.hpp"

namespace {

using namespace rovib;
using json = nlohmann::ordered_json;

struct CommonOptions {
    std::optional<std::string> config;
    std::optional<std::string> output;
    std::optional<std::string> format;
    bool no_timestamp = false;
    std::optional<int> threads;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, CommonOptions& o) {
    sub->add_option("--config", o.config, "key=value configuration file");
    sub->add_option("--output", o.output, "output file (default stdout)");
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--no-timestamp", o.no_timestamp, "omit the timestamp header line");
    sub->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("overrides", o.overrides, "key=value overrides applied after the config file");
}

RunConfig resolve(const CommonOptions& o) {
    std::vector<std::string> overrides = o.overrides;
    if (o.output) overrides.push_back("output=" + *o.output);
    if (o.format) overrides.push_back("format=" + *o.format);
    if (o.no_timestamp) overrides.push_back("timestamp=false");
    if (o.threads) overrides.push_back("threads=" + std::to_string(*o.threads));
    auto cfg = parse_config(o.config ? std::optional<std::filesystem::path>(*o.config) : std::nullopt, overrides);
    for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << '\n';
    return cfg;
}

DerivedParams derive_and_warn(const PhysicalParams& p) {
    auto d = derive_params(p);
    for (const auto& w : d.warnings()) std::cerr << "warning: " << w << '\n';
    return d;
}

int cmd_derive(const RunConfig& cfg) {
    const auto& p = cfg.params;
    const auto d = derive_and_warn(p);
    ResultTable t{"derive", {"quantity", "value"}, {}, {}};
    auto add = [&](const char* name, Cell v) { t.rows.push_back({std::string(name), std::move(v)}); };
    add("omega_c", d.omega_c);
    add("mode_index", static_cast<long long>(d.mode_index));
    add("resonance_error", d.resonance_error);
    add("wave_number", d.wave_number);
    add("moment_of_inertia", d.moment_of_inertia);
    add("g_z", d.g_z);
    add("g_phi", d.g_phi);
    add("gamma", d.gamma);
    add("gamma_z", d.gamma_z);
    add("gamma_phi", d.gamma_phi);
    add("a_in", d.a_in);
    add("coupling_ratio", coupling_ratio(d, p));
    add("radiation_pressure_shift", radiation_pressure_shift(d));
    emit_results(t, cfg);
    return 0;
}

int cmd_steady(const RunConfig& cfg) {
    std::vector<double> deltas{cfg.params.detuning_value};
    std::vector<double> powers{cfg.params.input_power};
    for (const auto& a : cfg.axes) {
        if (a.name == AxisName::Detuning) deltas = a.values();
        else if (a.name == AxisName::Power) powers = a.values();
        else throw Error(ErrorCode::InvalidArgument, "steady accepts only detuning and power axes");
    }
    ResultTable t{"steady", {"delta_rad_s", "P_in_W", "photon_number", "z_s", "phi_s", "stable"}, {}, {}};
    for (double delta : deltas) {
        for (double power : powers) {
            PhysicalParams p = cfg.params;
            p.detuning_value = delta;
            p.input_power = power;
            const auto d = derive_params(p);
            if (p.detuning_mode == DetuningMode::Feedback) {
                const auto s = steady_state_feedback(d, delta);
                t.rows.push_back({s.bare_detuning, power, s.photon_number, s.z_s, s.phi_s, true});
            } else {
                for (const auto& b : steady_state_fixed_detuning(d, delta)) {
                    const auto s = steady_state_from_photon_number(d, b.photon_number, delta);
                    t.rows.push_back({delta, power, s.photon_number, s.z_s, s.phi_s, b.stable});
                }
            }
        }
    }
    emit_results(t, cfg);
    return 0;
}

int cmd_stability(RunConfig cfg) {
    const auto d = derive_and_warn(cfg.params);
    const auto s = working_point(cfg.params, d);
    const auto m = build_linear_model(d, s);
    ResultTable t{"stability", {"re", "im"}, {}, {}};
    for (const auto& ev : m.eigenvalues) t.rows.push_back({ev.real(), ev.imag()});
    json summary;
    summary["stable"] = m.stable;
    summary["max_real_part"] = m.max_real_eigenvalue();
    summary["photon_number"] = s.photon_number;
    summary["effective_detuning"] = s.effective_detuning;
    t.summary_json = summary.dump();
    cfg.format = OutputFormat::Json;
    emit_results(t, cfg);
    return 0;
}

int cmd_spectrum(const RunConfig& cfg) {
    const auto& p = cfg.params;
    const auto d = derive_and_warn(p);
    const auto m = build_linear_model(d, working_point(p, d));
    if (!m.stable) {
        throw Error(ErrorCode::UnstableSystem, "largest eigenvalue real part " + format_double(m.max_real_eigenvalue()) +
                                                   " >= 0; no spectrum computed");
    }
    const auto grid = spectrum_grid(d, cfg.grid_lo(), cfg.grid_hi(), cfg.omega_points, cfg.fine_per_linewidth);
    const auto curve = entanglement_curve(m, d, grid, p.temperature, cfg.threads);

    ResultTable t{"spectrum", {"omega_rad_s", "E", "V_Ru", "V_Rv", "D"}, {}, {}};
    for (const auto& pt : curve) t.rows.push_back({pt.omega, pt.E, pt.V_Ru, pt.V_Rv, pt.D});

    const double resonances[] = {d.omega_z, d.omega_phi};
    const auto peak = find_peak(curve, resonances, std::min(d.gamma_z, d.gamma_phi));
    json summary;
    summary["omega_peak"] = peak.omega;
    summary["E_min"] = peak.E_grid;
    summary["E_min_refined"] = peak.E;
    summary["grid_step_at_peak"] = peak.grid_step;
    json intervals = json::array();
    double bandwidth = 0;
    for (const auto& [lo, hi] : entangled_intervals(curve)) {
        intervals.push_back({lo, hi});
        bandwidth += hi - lo;
    }
    summary["entangled_intervals"] = intervals;
    summary["entanglement_bandwidth"] = bandwidth;
    t.summary_json = summary.dump();
    emit_results(t, cfg);
    return 0;
}

int cmd_sweep(const RunConfig& cfg) {
    if (cfg.axes.empty()) throw Error(ErrorCode::InvalidArgument, "sweep needs axis1 (and optionally axis2)");
    const auto rows = run_sweep(cfg.sweep_spec());
    ResultTable t{"sweep", {"axis1", "axis2", "E_extremum", "omega_peak_rad_s", "stable_flag", "error"}, {}, {}};
    for (const auto& r : rows) {
        t.rows.push_back({r.axis1, r.axis2 ? Cell(*r.axis2) : Cell{}, r.E_extremum ? Cell(*r.E_extremum) : Cell{},
                          r.omega_peak ? Cell(*r.omega_peak) : Cell{}, r.stable, r.error});
    }
    emit_results(t, cfg);
    return 0;
}

json tune_json(const TuneResult& r) {
    json j;
    j["lambda_new"] = r.lambda_new;
    j["L_new"] = r.L_new;
    j["mode_index"] = r.mode_index;
    j["residual_imbalance"] = r.residual_imbalance;
    j["delta_lambda"] = r.delta_lambda;
    j["delta_L"] = r.delta_L;
    j["unconstrained_delta_lambda"] = r.unconstrained_delta_lambda;
    return j;
}

int cmd_tune(RunConfig cfg) {
    ResultTable t{"tune", {}, {}, {}};
    cfg.format = OutputFormat::Json;
    try {
        t.summary_json = tune_json(tune_couplings(cfg.params, cfg.tune_window)).dump();
    } catch (const TuneError& e) {
        t.summary_json = tune_json(e.best()).dump();
        emit_results(t, cfg);
        throw;
    }
    emit_results(t, cfg);
    return 0;
}

int cmd_selfcheck() {
    bool ok = true;
    for (const auto& r : oracles::run_selfcheck()) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": computed " << format_double(r.computed)
                  << " reference " << format_double(r.reference) << " error " << format_double(r.error)
                  << " tolerance " << format_double(r.tolerance) << '\n';
        ok = ok && r.passed;
    }
    return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ro-vibrational mirror entanglement from Laguerre-Gaussian radiation pressure"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    CommonOptions opts;
    struct Entry {
        const char* name;
        const char* help;
    };
    const Entry entries[] = {
        {"derive", "print derived couplings and rates"},
        {"steady", "steady-state working point(s) as CSV"},
        {"stability", "drift-matrix eigenvalues and stability verdict as JSON"},
        {"spectrum", "E(omega) and quadrature densities on a frequency grid"},
        {"sweep", "entanglement over one or two parameter axes"},
        {"tune", "balance the couplings by adjusting wavelength and cavity length"},
    };
    std::vector<CLI::App*> subs;
    for (const auto& e : entries) {
        auto* sub = app.add_subcommand(e.name, e.help);
        add_common(sub, opts);
        subs.push_back(sub);
    }
    auto* selfcheck = app.add_subcommand("selfcheck", "run the oracle reports");
    selfcheck->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (selfcheck->parsed()) return cmd_selfcheck();
        const auto cfg = resolve(opts);
        const std::string name = app.get_subcommands().front()->get_name();
        if (name == "derive") return cmd_derive(cfg);
        if (name == "steady") return cmd_steady(cfg);
        if (name == "stability") return cmd_stability(cfg);
        if (name == "spectrum") return cmd_spectrum(cfg);
        if (name == "sweep") return cmd_sweep(cfg);
        if (name == "tune") return cmd_tune(cfg);
    } catch (const rovib::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 2;
}
