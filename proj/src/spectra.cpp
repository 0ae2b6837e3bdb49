#include "rovib/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rovib/errors.hpp"
#include "rovib/parallel.hpp"

namespace rovib {

namespace {

OutputMatrix propagate(const TransferMatrix& tp, const NoiseMatrix& C, const TransferMatrix& tm) {
    return tp.T * C * tm.T.transpose();
}

StateVector unit(int i) {
    StateVector v = StateVector::Zero();
    v(i) = 1.0;
    return v;
}

}  // namespace

OutputSpectralMatrix output_spectrum(const LinearModel& m, double omega, const InputCorrelation& c) {
    if (c.omega != omega) {
        throw Error(ErrorCode::InvalidArgument, "input correlation evaluated at a different frequency");
    }
    const auto tp = transfer(m, omega);
    const auto tm = transfer(m, -omega);
    return OutputSpectralMatrix{omega, c.flavor, propagate(tp, c.C, tm)};
}

cplx quadrature_correlation(const OutputSpectralMatrix& at_omega, const OutputSpectralMatrix& at_minus_omega,
                            const StateVector& a, const StateVector& b) {
    if (at_omega.flavor != at_minus_omega.flavor) {
        throw Error(ErrorCode::FlavorMismatch, std::string("cannot combine ") + to_string(at_omega.flavor) +
                                                   " and " + to_string(at_minus_omega.flavor) + " spectra");
    }
    if (at_minus_omega.omega != -at_omega.omega) {
        throw Error(ErrorCode::InvalidArgument, "spectral matrices are not evaluated at +omega and -omega");
    }
    const Eigen::Matrix<cplx, kStateDim, 1> ac = a.cast<cplx>();
    const Eigen::Matrix<cplx, kStateDim, 1> bc = b.cast<cplx>();
    const cplx plus = ac.transpose() * at_omega.V * bc;
    const cplx minus = ac.transpose() * at_minus_omega.V * bc;
    return 0.25 * (plus + minus);
}

double quadrature_density(const OutputSpectralMatrix& at_omega, const OutputSpectralMatrix& at_minus_omega,
                          const StateVector& coeffs) {
    if (at_omega.flavor != Flavor::Symmetrized || at_minus_omega.flavor != Flavor::Symmetrized) {
        throw Error(ErrorCode::FlavorMismatch, "quadrature variance densities need SYMMETRIZED spectra");
    }
    const cplx v = quadrature_correlation(at_omega, at_minus_omega, coeffs, coeffs);
    if (std::abs(v.imag()) > 1e-10 * std::abs(v.real()) && std::abs(v.imag()) > 1e-300) {
        throw Error(ErrorCode::NumericalFailure, "symmetrized quadrature density has an imaginary part");
    }
    return v.real();
}

SpectrumPoint entanglement_measure(const LinearModel& m, const DerivedParams& d, double omega, double temperature) {
    if (omega == 0.0) throw Error(ErrorCode::InvalidArgument, "omega = 0 is excluded");
    const auto tp = transfer(m, omega);
    const auto tm = transfer(m, -omega);

    const auto sym_p = input_correlation(omega, temperature, d, Flavor::Symmetrized);
    const auto sym_m = input_correlation(-omega, temperature, d, Flavor::Symmetrized);
    const auto com_p = input_correlation(omega, temperature, d, Flavor::Commutator);
    const auto com_m = input_correlation(-omega, temperature, d, Flavor::Commutator);

    const OutputSpectralMatrix Vp{omega, Flavor::Symmetrized, propagate(tp, sym_p.C, tm)};
    const OutputSpectralMatrix Vm{-omega, Flavor::Symmetrized, propagate(tm, sym_m.C, tp)};
    const OutputSpectralMatrix Kp{omega, Flavor::Commutator, propagate(tp, com_p.C, tm)};
    const OutputSpectralMatrix Km{-omega, Flavor::Commutator, propagate(tm, com_m.C, tp)};

    SpectrumPoint pt;
    pt.omega = omega;
    pt.V_Ru = quadrature_density(Vp, Vm, kUCoeffs);
    pt.V_Rv = quadrature_density(Vp, Vm, kVCoeffs);
    pt.D = std::abs(quadrature_correlation(Kp, Km, unit(state::z), unit(state::p_z)));
    if (!(pt.D >= 1e-300)) {
        throw Error(ErrorCode::DegenerateDenominator, "commutator density vanishes at omega = " + std::to_string(omega));
    }
    pt.E = pt.V_Ru * pt.V_Rv / (pt.D * pt.D);
    return pt;
}

EntanglementCurve entanglement_curve(const LinearModel& m, const DerivedParams& d, std::span<const double> omegas,
                                     double temperature, int threads) {
    if (!m.stable) throw Error(ErrorCode::UnstableSystem, "refusing to evaluate spectra of an unstable model");
    EntanglementCurve curve(omegas.size());
    parallel_for(omegas.size(), threads,
                 [&](std::size_t i) { curve[i] = entanglement_measure(m, d, omegas[i], temperature); });
    return curve;
}

Peak find_peak(std::span<const SpectrumPoint> curve, std::span<const double> resonances, double linewidth) {
    if (curve.empty()) throw Error(ErrorCode::InvalidArgument, "empty entanglement curve");
    std::vector<SpectrumPoint> pts(curve.begin(), curve.end());
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.omega < b.omega; });

    if (linewidth > 0) {
        for (double r : resonances) {
            if (r < pts.front().omega || r > pts.back().omega) continue;
            const auto n = std::count_if(pts.begin(), pts.end(),
                                         [&](const auto& p) { return std::abs(p.omega - r) <= linewidth / 2; });
            if (n < 11) {
                throw Error(ErrorCode::GridTooCoarse, std::to_string(n) + " grid points within the mechanical linewidth at " +
                                                          std::to_string(r) + " rad/s (need 11)");
            }
        }
    }

    const auto it = std::min_element(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.E < b.E; });
    const std::size_t i = static_cast<std::size_t>(it - pts.begin());
    Peak peak{it->omega, it->E, it->E, 0.0};
    if (i == 0 || i + 1 == pts.size()) {
        if (pts.size() > 1) peak.grid_step = i == 0 ? pts[1].omega - pts[0].omega : pts[i].omega - pts[i - 1].omega;
        return peak;
    }
    const double x0 = pts[i - 1].omega, x1 = pts[i].omega, x2 = pts[i + 1].omega;
    const double y0 = pts[i - 1].E, y1 = pts[i].E, y2 = pts[i + 1].E;
    peak.grid_step = std::max(x1 - x0, x2 - x1);

    // Vertex of the parabola through the three points, in coordinates
    // relative to the middle one.
    const double h0 = x0 - x1, h2 = x2 - x1;
    const double s0 = (y0 - y1) / h0, s2 = (y2 - y1) / h2;
    const double curvature = (s2 - s0) / (h2 - h0);  // a in y = y1 + b t + a t^2
    if (curvature > 0) {
        const double b = s0 - curvature * h0;
        const double t = std::clamp(-b / (2.0 * curvature), h0, h2);
        peak.omega = x1 + t;
        peak.E = y1 + b * t + curvature * t * t;
    }
    return peak;
}

std::vector<std::pair<double, double>> entangled_intervals(std::span<const SpectrumPoint> curve) {
    std::vector<SpectrumPoint> pts(curve.begin(), curve.end());
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.omega < b.omega; });
    std::vector<std::pair<double, double>> out;
    auto crossing = [](const SpectrumPoint& a, const SpectrumPoint& b) {
        return a.omega + (1.0 - a.E) * (b.omega - a.omega) / (b.E - a.E);
    };
    bool inside = false;
    double start = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const bool below = pts[i].E < 1.0;
        if (below && !inside) {
            start = i == 0 ? pts[0].omega : crossing(pts[i - 1], pts[i]);
            inside = true;
        } else if (!below && inside) {
            out.emplace_back(start, crossing(pts[i - 1], pts[i]));
            inside = false;
        }
    }
    if (inside) out.emplace_back(start, pts.back().omega);
    return out;
}

std::vector<double> spectrum_grid(const DerivedParams& d, double lo, double hi, int coarse_points,
                                  int fine_per_linewidth) {
    if (!(hi > lo) || coarse_points < 2) throw Error(ErrorCode::InvalidArgument, "need lo < hi and >= 2 grid points");
    if (fine_per_linewidth < 1) throw Error(ErrorCode::InvalidArgument, "fine_per_linewidth must be >= 1");
    std::vector<double> g;
    for (int k = 0; k < coarse_points; ++k) g.push_back(lo + (hi - lo) * k / (coarse_points - 1));

    const double lw = std::min(d.gamma_z, d.gamma_phi);
    const double fine = lw / fine_per_linewidth;
    const double mean = 0.5 * (d.omega_z + d.omega_phi);
    const int half = 5 * fine_per_linewidth;
    for (double c : {d.omega_z, d.omega_phi, mean}) {
        for (int k = -half; k <= half; ++k) g.push_back(c + k * fine);
    }
    // Medium-density band bridging the two resonances.
    const double band_lo = std::min(d.omega_z, d.omega_phi) - 5 * lw;
    const double band_hi = std::max(d.omega_z, d.omega_phi) + 5 * lw;
    const double medium = std::max(lw / 4, (band_hi - band_lo) / 20000);
    const auto band_points = static_cast<long>((band_hi - band_lo) / medium);
    for (long k = 0; k <= band_points; ++k) g.push_back(band_lo + k * medium);

    std::erase_if(g, [&](double w) { return w < lo || w > hi || w == 0.0; });
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end(),
                        [](double a, double b) { return std::abs(a - b) <= 1e-13 * std::abs(b); }),
            g.end());
    return g;
}

}  // namespace rovib
