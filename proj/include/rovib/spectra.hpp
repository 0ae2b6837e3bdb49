#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rovib/linear_dynamics.hpp"
#include "rovib/noise_model.hpp"

namespace rovib {

using OutputMatrix = Eigen::Matrix<cplx, kStateDim, kStateDim>;

// <dx_i(w) dx_j(w')> = 2 pi delta(w + w') V_ij(w).
struct OutputSpectralMatrix {
    double omega = 0;
    Flavor flavor = Flavor::Raw;
    OutputMatrix V = OutputMatrix::Zero();
};

struct SpectrumPoint {
    double omega = 0;
    double V_Ru = 0;
    double V_Rv = 0;
    double D = 0;
    double E = 0;
};

// Coefficient vectors over the state order.
inline const StateVector kUCoeffs = (StateVector() << 0, 0, 1, 0, -1, 0).finished();  // dz - dphi
inline const StateVector kVCoeffs = (StateVector() << 0, 0, 0, 1, 0, 1).finished();  // dp_z + dL_z

// V(w) = T(w) C(w) T(-w)^T.
OutputSpectralMatrix output_spectrum(const LinearModel& m, double omega, const InputCorrelation& c);

// Spectral density of <R_a R_b> for R_w = [dw(w) + dw(-w)] / 2, i.e.
// (1/4)[a^T V(w) b + a^T V(-w) b].
cplx quadrature_correlation(const OutputSpectralMatrix& at_omega, const OutputSpectralMatrix& at_minus_omega,
                            const StateVector& a, const StateVector& b);

// Real, non-negative density of <R_w^2>; symmetrized matrices only.
double quadrature_density(const OutputSpectralMatrix& at_omega, const OutputSpectralMatrix& at_minus_omega,
                          const StateVector& coeffs);

SpectrumPoint entanglement_measure(const LinearModel& m, const DerivedParams& d, double omega, double temperature);

using EntanglementCurve = std::vector<SpectrumPoint>;

EntanglementCurve entanglement_curve(const LinearModel& m, const DerivedParams& d, std::span<const double> omegas,
                                     double temperature, int threads = 1);

struct Peak {
    double omega = 0;
    double E = 0;
    double E_grid = 0;     // smallest evaluated E on the grid
    double grid_step = 0;  // local grid spacing around the minimum
};

// Grid argmin of E refined by a parabola through the neighbouring points.
// Each resonance in `resonances` that falls inside the grid must have at
// least 11 points within +/- linewidth/2, otherwise GridTooCoarse.
Peak find_peak(std::span<const SpectrumPoint> curve, std::span<const double> resonances = {},
               double linewidth = 0);

// Maximal intervals where E < 1, crossing points linearly interpolated.
std::vector<std::pair<double, double>> entangled_intervals(std::span<const SpectrumPoint> curve);

// Uniform grid on [lo, hi] merged with a fine window covering
// [min(omega_z, omega_phi) - 5 gamma_m, max(...) + 5 gamma_m] at spacing
// gamma_m / fine_per_linewidth. The mechanical frequencies and their mean
// are always grid points; omega = 0 is dropped.
std::vector<double> spectrum_grid(const DerivedParams& d, double lo, double hi, int coarse_points,
                                  int fine_per_linewidth = 40);

}  // namespace rovib
