#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rovib/errors.hpp"
#include "rovib/model_params.hpp"
#include "rovib/spectra.hpp"

namespace rovib {

enum class AxisName { Omega, Temperature, ImbalancePercent, Detuning, Power };
enum class Spacing { Linear, Log };
enum class ImbalanceMechanism {
    OmegaPhi,  // scale omega_phi (mechanical frequency mismatch)
    Radius,    // scale the mirror radius, i.e. the moment of inertia
};

const char* to_string(AxisName a) noexcept;
const char* to_string(Spacing s) noexcept;
const char* to_string(ImbalanceMechanism m) noexcept;
AxisName axis_name_from_string(const std::string& s);
Spacing spacing_from_string(const std::string& s);
ImbalanceMechanism imbalance_mechanism_from_string(const std::string& s);

struct SweepAxis {
    AxisName name = AxisName::Omega;
    double min = 0;
    double max = 0;
    int points = 2;
    Spacing spacing = Spacing::Linear;

    std::vector<double> values() const;
    // Parses "name:min:max:points[:linear|log]".
    static SweepAxis parse(const std::string& text);
    std::string to_string() const;
};

// Frequency grid used when omega is not itself a sweep axis.
struct OmegaGrid {
    double lo_factor = 0.95;  // relative to omega_phi
    double hi_factor = 1.05;
    int coarse_points = 400;
    int fine_per_linewidth = 40;
};

struct SweepSpec {
    std::vector<SweepAxis> axes;  // one or two
    PhysicalParams baseline;
    OmegaGrid grid;
    ImbalanceMechanism imbalance_mechanism = ImbalanceMechanism::OmegaPhi;
    // Balance the baseline couplings with tune_couplings before applying
    // any imbalance.
    bool balance_baseline = true;
    double tune_window = 5e-9;  // m
    int threads = 1;

    void validate() const;
};

struct SweepRow {
    double axis1 = 0;
    std::optional<double> axis2;
    bool stable = false;
    std::optional<double> E_extremum;  // min over omega, or E(omega) on an omega axis
    std::optional<double> omega_peak;
    std::string error;  // per-point failure, empty on success
};

// g_z/g_phi = 1 + imbalance_percent/100 on a baseline balanced to 1e-6.
PhysicalParams apply_imbalance(const PhysicalParams& p, double imbalance_percent,
                               ImbalanceMechanism mechanism = ImbalanceMechanism::OmegaPhi);

std::vector<SweepRow> run_sweep(const SweepSpec& spec);

struct TuneResult {
    double lambda_new = 0;
    double L_new = 0;
    long long mode_index = 0;
    double residual_imbalance = 0;
    double delta_lambda = 0;
    double delta_L = 0;
    // Wavelength shift that balances the couplings ignoring the integer
    // resonance condition.
    double unconstrained_delta_lambda = 0;
};

// Cavity-length band searched for resonances around the nominal L.
inline constexpr double kTuneLengthBand = 200e-6;  // m

// Finds lambda within [lambda - window, lambda + window] and an integer n
// with L = n lambda / 2 inside L +/- 200 um minimising |g_z/g_phi - 1|.
// Throws TuneError(TargetUnreachable) carrying the best candidate when the
// residual stays above 1e-6.
TuneResult tune_couplings(const PhysicalParams& p, double lambda_window);

// Params with the tuned wavelength and cavity length substituted.
PhysicalParams apply_tuning(const PhysicalParams& p, const TuneResult& t);

class TuneError : public Error {
public:
    TuneError(ErrorCode code, const std::string& what, TuneResult best) : Error(code, what), best_(best) {}
    const TuneResult& best() const noexcept { return best_; }

private:
    TuneResult best_;
};

}  // namespace rovib
