#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rovib/linear_dynamics.hpp"
#include "rovib/model_params.hpp"
#include "rovib/noise_model.hpp"

// Verification machinery kept apart from the production code paths it
// checks: closed-form decoupled spectra, sum-rule quadrature, brute-force
// bistability scanning and a Routh-Hurwitz stability test.
namespace rovib::oracles {

struct OracleReport {
    std::string name;
    double computed = 0;
    double reference = 0;
    double error = 0;  // relative unless the reference is zero
    double tolerance = 0;
    bool passed = false;
};

// Position density w_j^2 S_j(w) / ((w_j^2 - w^2)^2 + gamma_j^2 w^2) of an
// isolated damped oscillator in the requested ordering.
double analytic_mechanical_spectrum(double omega, double temperature, double gamma_j, double omega_j, Flavor flavor);

struct SumRuleOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_intervals = 200000;
};

// (1/2pi) * integral over the real line of the Commutator-flavor output
// density V_ij(w). Canonical pairs give i, commuting pairs 0.
std::complex<double> sumrule_integrate(const LinearModel& m, const DerivedParams& d, int i, int j,
                                       const SumRuleOptions& opts = {});

// (1/2pi) * integral of the Symmetrized-flavor density V_ij(w) at temperature T.
std::complex<double> symmetrized_integrate(const LinearModel& m, const DerivedParams& d, int i, int j,
                                           double temperature, const SumRuleOptions& opts = {});

struct BranchCountMap {
    std::vector<double> deltas;
    std::vector<double> powers;
    std::vector<int> counts;  // row-major: counts[i_delta * powers.size() + i_power]

    int at(std::size_t i_delta, std::size_t i_power) const { return counts[i_delta * powers.size() + i_power]; }
};

// Sign changes of the unscaled steady-state cubic in n on a dense grid,
// per (delta, P_in) cell. `d` supplies everything except a_in.
BranchCountMap brute_cubic_scan(const DerivedParams& d, double delta_lo, double delta_hi, int delta_points,
                                double power_lo, double power_hi, int power_points, int scan_points = 200000);

// Coefficients c_0..c_n (c_n = 1) of det(s I - M) via Faddeev-LeVerrier.
std::vector<double> characteristic_polynomial(const Eigen::MatrixXd& M);

// Hurwitz determinants of a real polynomial with ascending coefficients.
bool routh_hurwitz_stable(const std::vector<double>& ascending_coeffs);

std::vector<OracleReport> run_selfcheck();

}  // namespace rovib::oracles
