#include "rovib/model_params.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "rovib/errors.hpp"

namespace rovib {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::InvalidParams, what);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0; }

}  // namespace

const char* to_string(DetuningMode mode) noexcept {
    return mode == DetuningMode::Feedback ? "FEEDBACK" : "FIXED";
}

DetuningMode detuning_mode_from_string(const std::string& text) {
    std::string up;
    for (char c : text) up += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (up == "FEEDBACK") return DetuningMode::Feedback;
    if (up == "FIXED") return DetuningMode::Fixed;
    throw Error(ErrorCode::InvalidParams, "detuning_mode must be FEEDBACK or FIXED, got '" + text + "'");
}

void PhysicalParams::validate() const {
    require(finite_positive(mass), "mass must be > 0");
    require(finite_positive(mirror_radius), "mirror_radius must be > 0");
    require(finite_positive(omega_z), "omega_z must be > 0");
    require(finite_positive(omega_phi), "omega_phi must be > 0");
    require(finite_positive(Q_z), "Q_z must be > 0");
    require(finite_positive(Q_phi), "Q_phi must be > 0");
    require(oam_charge >= 1, "oam_charge must be an integer >= 1");
    require(finite_positive(cavity_length), "cavity_length must be > 0");
    require(std::isfinite(finesse) && finesse > 1, "finesse must be > 1");
    require(finite_positive(wavelength), "wavelength must be > 0");
    require(std::isfinite(input_power) && input_power >= 0, "input_power must be >= 0");
    require(std::isfinite(detuning_value), "detuning_value must be finite");
    require(std::isfinite(temperature) && temperature >= 0, "temperature must be >= 0");
}

std::vector<std::string> DerivedParams::warnings() const {
    std::vector<std::string> out;
    if (resonance_mismatch()) {
        std::ostringstream os;
        os.precision(6);
        os << "ResonanceMismatch: cavity length is off the n = " << mode_index
           << " resonance by a fraction " << resonance_error << " (tolerance " << kResonanceTolerance << ")";
        out.push_back(os.str());
    }
    return out;
}

DerivedParams derive_params(const PhysicalParams& p) {
    using namespace constants;
    p.validate();

    DerivedParams d;
    d.omega_c = two_pi * speed_of_light / p.wavelength;
    d.mode_index = std::llround(2.0 * p.cavity_length / p.wavelength);
    d.resonance_error =
        std::abs(p.cavity_length - static_cast<double>(d.mode_index) * p.wavelength / 2.0) / p.cavity_length;
    d.wave_number = two_pi / p.wavelength;
    d.moment_of_inertia = p.mass * p.mirror_radius * p.mirror_radius / 2.0;
    d.g_z = d.omega_c / p.cavity_length * std::sqrt(hbar / (p.mass * p.omega_z));
    d.g_phi = speed_of_light * p.oam_charge / p.cavity_length * std::sqrt(hbar / (d.moment_of_inertia * p.omega_phi));
    d.gamma = pi * speed_of_light / (p.cavity_length * p.finesse);
    d.gamma_z = p.omega_z / p.Q_z;
    d.gamma_phi = p.omega_phi / p.Q_phi;
    d.a_in = std::sqrt(p.input_power / (hbar * d.omega_c));
    d.omega_z = p.omega_z;
    d.omega_phi = p.omega_phi;
    return d;
}

double coupling_ratio(const DerivedParams& d, const PhysicalParams& p) {
    return constants::two_pi / (p.oam_charge * p.wavelength) *
           std::sqrt(d.moment_of_inertia * p.omega_phi / (p.mass * p.omega_z));
}

}  // namespace rovib
