#include "rovib/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rovib/errors.hpp"

namespace rovib {

namespace {

constexpr double kResidualBound = 1e-10;

// Scaled form x (1/4 + (d - x)^2) - s with x = n G / gamma.
double scaled_residual(const ScaledCubic& c, long double x, double s) {
    const long double v = ((x + c.c2) * x + c.c1) * x + c.c0;
    return static_cast<double>(std::abs(v) / s);
}

double newton_polish(const ScaledCubic& c, double x0) {
    long double x = x0;
    for (int it = 0; it < 200; ++it) {
        const long double f = ((x + c.c2) * x + c.c1) * x + c.c0;
        const long double df = (3.0L * x + 2.0L * c.c2) * x + c.c1;
        if (df == 0.0L) break;
        const long double step = f / df;
        x -= step;
        if (std::abs(step) <= 1e-18L * std::max(1.0L, std::abs(x))) break;
    }
    return static_cast<double>(x);
}

std::vector<double> real_roots(const ScaledCubic& c) {
    // Depressed cubic t^3 + p t + q with x = t - c2/3.
    const double shift = c.c2 / 3.0;
    const double p = c.c1 - c.c2 * c.c2 / 3.0;
    const double q = 2.0 * c.c2 * c.c2 * c.c2 / 27.0 - c.c2 * c.c1 / 3.0 + c.c0;
    std::vector<double> roots;
    const double disc = -(4.0 * p * p * p + 27.0 * q * q);
    if (disc > 0 && p < 0) {
        const double r = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k) roots.push_back(r * std::cos(theta - constants::two_pi * k / 3.0) - shift);
    } else {
        const double sq = std::sqrt(std::max(0.0, q * q / 4.0 + p * p * p / 27.0));
        const double t = std::cbrt(-q / 2.0 + sq) + std::cbrt(-q / 2.0 - sq);
        roots.push_back(t - shift);
    }
    return roots;
}

}  // namespace

double ScaledCubic::discriminant() const {
    const double b = c2, c = c1, d = c0;
    return 18 * b * c * d - 4 * b * b * b * d + b * b * c * c - 4 * c * c * c - 27 * d * d;
}

double radiation_pressure_shift(const DerivedParams& d) {
    return d.g_z * d.g_z / d.omega_z + d.g_phi * d.g_phi / d.omega_phi;
}

SteadyState steady_state_from_photon_number(const DerivedParams& d, double photon_number, double delta) {
    SteadyState s;
    s.G = radiation_pressure_shift(d);
    s.photon_number = photon_number;
    s.a_s = std::sqrt(photon_number);
    s.z_s = d.g_z * photon_number / d.omega_z;
    s.phi_s = -d.g_phi * photon_number / d.omega_phi;
    s.bare_detuning = delta;
    s.effective_detuning = delta - photon_number * s.G;
    return s;
}

SteadyState steady_state_feedback(const DerivedParams& d, double Delta) {
    const double n = d.gamma * d.a_in * d.a_in / (d.gamma * d.gamma / 4.0 + Delta * Delta);
    const double G = radiation_pressure_shift(d);
    auto s = steady_state_from_photon_number(d, n, Delta + n * G);
    s.effective_detuning = Delta;
    return s;
}

ScaledCubic bistability_cubic(const DerivedParams& d, double delta) {
    const double G = radiation_pressure_shift(d);
    const double dd = delta / d.gamma;
    const double s = G * d.a_in * d.a_in / (d.gamma * d.gamma);
    return ScaledCubic{-2.0 * dd, dd * dd + 0.25, -s};
}

double steady_state_residual(const DerivedParams& d, double delta, double n) {
    const double G = radiation_pressure_shift(d);
    const double target = d.gamma * d.a_in * d.a_in;
    const double shift = delta - n * G;
    const double lhs = n * (d.gamma * d.gamma / 4.0 + shift * shift);
    return std::abs(lhs - target) / target;
}

std::vector<BistabilityBranch> steady_state_fixed_detuning(const DerivedParams& d, double delta) {
    const double target = d.gamma * d.a_in * d.a_in;
    if (target == 0.0) return {BistabilityBranch{0.0, 1, true}};

    const double G = radiation_pressure_shift(d);
    if (G == 0.0) {
        const double n = target / (d.gamma * d.gamma / 4.0 + delta * delta);
        return {BistabilityBranch{n, 1, true}};
    }

    const ScaledCubic cubic = bistability_cubic(d, delta);
    const double s = -cubic.c0;

    std::vector<double> xs;
    for (double x0 : real_roots(cubic)) {
        const double x = newton_polish(cubic, x0);
        if (!(x > 0) || scaled_residual(cubic, x, s) >= kResidualBound) {
            std::ostringstream os;
            os.precision(17);
            os << "root polishing did not converge for x^3 + (" << cubic.c2 << ") x^2 + (" << cubic.c1 << ") x + ("
               << cubic.c0 << "), x = n G / gamma, start " << x0 << " -> " << x;
            throw Error(ErrorCode::NumericalFailure, os.str());
        }
        xs.push_back(x);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end(),
                         [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(a, b); }),
             xs.end());

    std::vector<BistabilityBranch> branches;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        BistabilityBranch b;
        b.photon_number = xs[i] * d.gamma / G;
        b.branch_index = static_cast<int>(i) + 1;
        // dn/dP_in has the sign of the cubic's slope at the root.
        b.stable = !(xs.size() == 3 && cubic.derivative(xs[i]) < 0);
        branches.push_back(b);
    }
    return branches;
}

SteadyState working_point(const PhysicalParams& p, const DerivedParams& d) {
    if (p.detuning_mode == DetuningMode::Feedback) return steady_state_feedback(d, p.detuning_value);
    const auto branches = steady_state_fixed_detuning(d, p.detuning_value);
    return steady_state_from_photon_number(d, branches.front().photon_number, p.detuning_value);
}

}  // namespace rovib
