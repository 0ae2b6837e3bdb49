#include "rovib/sweeps.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "rovib/linear_dynamics.hpp"
#include "rovib/parallel.hpp"
#include "rovib/steady_state.hpp"

namespace rovib {

namespace {

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

double parse_number(const std::string& s, const std::string& context) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidArgument, "bad number '" + s + "' in " + context);
    }
}

// Tuner wavelength grid step.
constexpr double kLambdaStep = 0.1e-12;

double ratio_at_wavelength(PhysicalParams p, double lambda) {
    p.wavelength = lambda;
    return coupling_ratio(derive_params(p), p);
}

}  // namespace

const char* to_string(AxisName a) noexcept {
    switch (a) {
        case AxisName::Omega: return "omega";
        case AxisName::Temperature: return "temperature";
        case AxisName::ImbalancePercent: return "imbalance_percent";
        case AxisName::Detuning: return "detuning";
        case AxisName::Power: return "power";
    }
    return "?";
}

const char* to_string(Spacing s) noexcept { return s == Spacing::Linear ? "linear" : "log"; }

const char* to_string(ImbalanceMechanism m) noexcept {
    return m == ImbalanceMechanism::OmegaPhi ? "omega_phi" : "radius";
}

AxisName axis_name_from_string(const std::string& s) {
    const auto l = lower(s);
    for (auto a : {AxisName::Omega, AxisName::Temperature, AxisName::ImbalancePercent, AxisName::Detuning,
                   AxisName::Power}) {
        if (l == to_string(a)) return a;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown sweep axis '" + s + "'");
}

Spacing spacing_from_string(const std::string& s) {
    const auto l = lower(s);
    if (l == "linear") return Spacing::Linear;
    if (l == "log") return Spacing::Log;
    throw Error(ErrorCode::InvalidArgument, "spacing must be linear or log, got '" + s + "'");
}

ImbalanceMechanism imbalance_mechanism_from_string(const std::string& s) {
    const auto l = lower(s);
    if (l == "omega_phi") return ImbalanceMechanism::OmegaPhi;
    if (l == "radius") return ImbalanceMechanism::Radius;
    throw Error(ErrorCode::InvalidArgument, "imbalance_mechanism must be omega_phi or radius, got '" + s + "'");
}

std::vector<double> SweepAxis::values() const {
    if (points == 1) return {min};
    std::vector<double> v(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) {
        const double f = static_cast<double>(k) / (points - 1);
        v[k] = spacing == Spacing::Linear ? min + (max - min) * f : std::exp(std::log(min) + (std::log(max) - std::log(min)) * f);
    }
    v.front() = min;
    v.back() = max;
    return v;
}

SweepAxis SweepAxis::parse(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 4 && parts.size() != 5) {
        throw Error(ErrorCode::InvalidArgument, "axis must be name:min:max:points[:spacing], got '" + text + "'");
    }
    SweepAxis a;
    a.name = axis_name_from_string(parts[0]);
    a.min = parse_number(parts[1], "axis " + text);
    a.max = parse_number(parts[2], "axis " + text);
    const double pts = parse_number(parts[3], "axis " + text);
    if (pts != std::floor(pts)) throw Error(ErrorCode::InvalidArgument, "axis point count must be an integer");
    a.points = static_cast<int>(pts);
    if (parts.size() == 5) a.spacing = spacing_from_string(parts[4]);
    return a;
}

std::string SweepAxis::to_string() const {
    std::ostringstream os;
    os.precision(17);
    os << rovib::to_string(name) << ':' << min << ':' << max << ':' << points << ':' << rovib::to_string(spacing);
    return os.str();
}

void SweepSpec::validate() const {
    if (axes.empty() || axes.size() > 2) throw Error(ErrorCode::InvalidArgument, "a sweep needs one or two axes");
    if (axes.size() == 2 && axes[0].name == axes[1].name) {
        throw Error(ErrorCode::InvalidArgument, "sweep axes must differ");
    }
    for (const auto& a : axes) {
        if (a.points < 1) throw Error(ErrorCode::InvalidArgument, "axis needs at least one point");
        if (a.points == 1 ? a.min != a.max : !(a.min < a.max)) {
            throw Error(ErrorCode::InvalidArgument, "axis " + a.to_string() + ": need min < max (or min == max for one point)");
        }
        if (a.spacing == Spacing::Log && !(a.min > 0)) {
            throw Error(ErrorCode::InvalidArgument, "log axis needs positive bounds");
        }
    }
    if (grid.coarse_points < 2 || !(grid.lo_factor < grid.hi_factor)) {
        throw Error(ErrorCode::InvalidArgument, "bad omega grid");
    }
    baseline.validate();
}

PhysicalParams apply_imbalance(const PhysicalParams& p, double imbalance_percent, ImbalanceMechanism mechanism) {
    const auto d = derive_params(p);
    const double current = coupling_ratio(d, p);
    if (std::abs(current - 1.0) > 1e-6) {
        throw Error(ErrorCode::InvalidParams,
                    "baseline couplings are not balanced (g_z/g_phi - 1 = " + std::to_string(current - 1.0) + ")");
    }
    const double target = 1.0 + imbalance_percent / 100.0;
    if (!(target > 0)) throw Error(ErrorCode::InvalidParams, "imbalance would require a non-positive frequency");
    PhysicalParams out = p;
    const double scale = target / current;
    switch (mechanism) {
        case ImbalanceMechanism::OmegaPhi:
            // g_z/g_phi grows as sqrt(omega_phi).
            out.omega_phi = p.omega_phi * scale * scale;
            break;
        case ImbalanceMechanism::Radius:
            // ... and linearly in R through I = M R^2 / 2.
            out.mirror_radius = p.mirror_radius * scale;
            break;
    }
    out.validate();
    return out;
}

TuneResult tune_couplings(const PhysicalParams& p, double lambda_window) {
    p.validate();
    if (!(lambda_window > 0)) throw Error(ErrorCode::InvalidArgument, "wavelength window must be positive");
    const double lambda0 = p.wavelength;
    const double r0 = coupling_ratio(derive_params(p), p);

    double lambda_best = lambda0;
    if (std::abs(r0 - 1.0) > 1e-12) {
        // Coarse scan on the 0.1 pm grid, then bisection on the bracket
        // around the best grid point (the ratio is monotone in lambda).
        const double lo = std::max(lambda0 - lambda_window, kLambdaStep);
        const double hi = lambda0 + lambda_window;
        const auto steps = static_cast<long>(std::ceil((hi - lo) / kLambdaStep));
        long best_k = 0;
        double best_err = std::numeric_limits<double>::infinity();
        for (long k = 0; k <= steps; ++k) {
            const double lam = std::min(hi, lo + k * kLambdaStep);
            const double err = std::abs(ratio_at_wavelength(p, lam) - 1.0);
            if (err < best_err) {
                best_err = err;
                best_k = k;
            }
        }
        double a = std::max(lo, lo + (best_k - 1) * kLambdaStep);
        double b = std::min(hi, lo + (best_k + 1) * kLambdaStep);
        double fa = ratio_at_wavelength(p, a) - 1.0;
        const double fb = ratio_at_wavelength(p, b) - 1.0;
        lambda_best = std::min(hi, lo + best_k * kLambdaStep);
        if (fa * fb <= 0) {
            for (int it = 0; it < 200 && b - a > 1e-16 * b; ++it) {
                const double m = 0.5 * (a + b);
                const double fm = ratio_at_wavelength(p, m) - 1.0;
                if (fm == 0) {
                    a = b = m;
                    break;
                }
                if ((fa < 0) == (fm < 0)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            const double mid = 0.5 * (a + b);
            if (std::abs(ratio_at_wavelength(p, mid) - 1.0) <= best_err) lambda_best = mid;
        }
    }

    const double L = p.cavity_length;
    const auto n_lo = static_cast<long long>(std::ceil(2.0 * (L - kTuneLengthBand) / lambda_best));
    const auto n_hi = static_cast<long long>(std::floor(2.0 * (L + kTuneLengthBand) / lambda_best));
    if (n_lo > n_hi || n_hi < 1) {
        throw Error(ErrorCode::NoResonanceInWindow, "no cavity resonance within L +/- 200 um");
    }
    TuneResult t;
    t.lambda_new = lambda_best;
    t.mode_index = std::clamp(std::llround(2.0 * L / lambda_best), std::max(n_lo, 1LL), n_hi);
    t.L_new = static_cast<double>(t.mode_index) * lambda_best / 2.0;
    t.delta_lambda = t.lambda_new - lambda0;
    t.delta_L = t.L_new - L;
    t.unconstrained_delta_lambda = lambda0 * (r0 - 1.0);

    const PhysicalParams tuned = apply_tuning(p, t);
    t.residual_imbalance = std::abs(coupling_ratio(derive_params(tuned), tuned) - 1.0);
    if (t.residual_imbalance > 1e-6) {
        throw TuneError(ErrorCode::TargetUnreachable,
                        "best residual imbalance " + std::to_string(t.residual_imbalance) + " within the window", t);
    }
    return t;
}

PhysicalParams apply_tuning(const PhysicalParams& p, const TuneResult& t) {
    PhysicalParams out = p;
    out.wavelength = t.lambda_new;
    out.cavity_length = t.L_new;
    return out;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    spec.validate();
    const bool has_imbalance = std::any_of(spec.axes.begin(), spec.axes.end(),
                                           [](const auto& a) { return a.name == AxisName::ImbalancePercent; });
    PhysicalParams base = spec.baseline;
    if (has_imbalance && spec.balance_baseline) base = apply_tuning(base, tune_couplings(base, spec.tune_window));

    const auto v1 = spec.axes[0].values();
    const auto v2 = spec.axes.size() > 1 ? spec.axes[1].values() : std::vector<double>{};
    const std::size_t n2 = spec.axes.size() > 1 ? v2.size() : 1;
    std::vector<SweepRow> rows(v1.size() * n2);

    parallel_for(rows.size(), spec.threads, [&](std::size_t idx) {
        SweepRow& row = rows[idx];
        const std::size_t i = idx / n2, j = idx % n2;
        row.axis1 = v1[i];
        if (!v2.empty()) row.axis2 = v2[j];

        std::vector<std::pair<AxisName, double>> coords{{spec.axes[0].name, v1[i]}};
        if (!v2.empty()) coords.emplace_back(spec.axes[1].name, v2[j]);
        // Imbalance is applied first so it always acts on the balanced base.
        std::stable_sort(coords.begin(), coords.end(), [](const auto& a, const auto& b) {
            return (a.first == AxisName::ImbalancePercent) > (b.first == AxisName::ImbalancePercent);
        });
        try {
            PhysicalParams p = base;
            std::optional<double> omega;
            for (const auto& [name, value] : coords) {
                switch (name) {
                    case AxisName::ImbalancePercent: p = apply_imbalance(p, value, spec.imbalance_mechanism); break;
                    case AxisName::Temperature: p.temperature = value; break;
                    case AxisName::Detuning: p.detuning_value = value; break;
                    case AxisName::Power: p.input_power = value; break;
                    case AxisName::Omega: omega = value; break;
                }
            }
            const auto d = derive_params(p);
            const auto model = build_linear_model(d, working_point(p, d));
            row.stable = model.stable;
            if (!model.stable) return;
            if (omega) {
                row.E_extremum = entanglement_measure(model, d, *omega, p.temperature).E;
                row.omega_peak = *omega;
            } else {
                const auto grid = spectrum_grid(d, spec.grid.lo_factor * p.omega_phi, spec.grid.hi_factor * p.omega_phi,
                                                spec.grid.coarse_points, spec.grid.fine_per_linewidth);
                const auto curve = entanglement_curve(model, d, grid, p.temperature);
                const double resonances[] = {d.omega_z, d.omega_phi};
                const auto peak = find_peak(curve, resonances, std::min(d.gamma_z, d.gamma_phi));
                row.E_extremum = peak.E_grid;
                row.omega_peak = peak.omega;
            }
        } catch (const Error& e) {
            row.E_extremum.reset();
            row.omega_peak.reset();
            row.error = e.what();
        }
    });
    return rows;
}

}  // namespace rovib
