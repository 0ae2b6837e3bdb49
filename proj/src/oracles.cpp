#include "rovib/oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <set>

#include "rovib/constants.hpp"
#include "rovib/errors.hpp"
#include "rovib/spectra.hpp"
#include "rovib/steady_state.hpp"

namespace rovib::oracles {

namespace {

using cd = std::complex<double>;

// omega coth(hbar omega / 2 k_B T) through expm1, independent of the
// series/guard branches used by the noise model.
double omega_coth_expm1(double omega, double temperature) {
    if (temperature == 0.0) return std::abs(omega);
    const double x = constants::hbar * std::abs(omega) / (2.0 * constants::k_boltzmann * temperature);
    if (x == 0.0) return 2.0 * constants::k_boltzmann * temperature / constants::hbar;
    const double e = std::exp(-2.0 * x);
    return std::abs(omega) * (1.0 + e) / (-std::expm1(-2.0 * x));
}

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
constexpr std::array<double, 8> kXgk{0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                     0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                     0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                     0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk{0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                     0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                     0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                     0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg{0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b;
    cd value;
    double error;
    double l1;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk15(F&& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const cd fc = f(c);
    cd kronrod = fc * kWgk[7];
    cd gauss = fc * kWg[3];
    double l1 = std::abs(fc) * kWgk[7];
    for (int k = 0; k < 7; ++k) {
        const cd f1 = f(c - h * kXgk[k]);
        const cd f2 = f(c + h * kXgk[k]);
        kronrod += kWgk[k] * (f1 + f2);
        l1 += kWgk[k] * (std::abs(f1) + std::abs(f2));
        if (k % 2 == 1) gauss += kWg[k / 2] * (f1 + f2);
    }
    return Segment{a, b, kronrod * h, std::abs((kronrod - gauss) * h), l1 * h};
}

// Breakpoints clustered geometrically around every resonance of the model
// so that linewidths many decades below the carrier are resolved.
std::vector<double> breakpoints(const LinearModel& m, double cutoff) {
    std::set<double> pts{0.0, cutoff};
    double smallest = cutoff;
    for (const auto& ev : m.eigenvalues) {
        const double centre = std::abs(ev.imag());
        const double width = std::max(std::abs(ev.real()), 1e-12 * std::max(centre, 1.0));
        smallest = std::min(smallest, width);
        pts.insert(centre);
        for (double off = width / 4; off < cutoff; off *= 2) {
            if (centre - off > 0) pts.insert(centre - off);
            if (centre + off < cutoff) pts.insert(centre + off);
        }
    }
    for (double w = smallest; w < cutoff; w *= 2) pts.insert(w);
    return {pts.begin(), pts.end()};
}

template <class F>
cd integrate_even_sum(const LinearModel& m, double cutoff, F&& density, const SumRuleOptions& opts) {
    auto f = [&](double w) { return density(w) + density(-w); };
    const auto bp = breakpoints(m, cutoff);
    std::priority_queue<Segment> queue;
    cd total = 0;
    double err = 0;
    double mass = 0;
    for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
        auto s = gk15(f, bp[k], bp[k + 1]);
        total += s.value;
        err += s.error;
        mass += s.l1;
        queue.push(s);
    }
    int intervals = static_cast<int>(queue.size());
    // Relative accuracy is measured against the L1 norm so cancelling
    // integrands (commuting pairs) terminate.
    auto converged = [&] {
        return err <= std::max(opts.abs_tol * constants::two_pi, opts.rel_tol * std::max(std::abs(total), mass));
    };
    while (!converged()) {
        if (intervals >= opts.max_intervals || queue.empty()) {
            throw Error(ErrorCode::QuadratureNotConverged,
                        "error estimate " + std::to_string(err / constants::two_pi) + " after " +
                            std::to_string(intervals) + " intervals");
        }
        const Segment s = queue.top();
        queue.pop();
        const double mid = 0.5 * (s.a + s.b);
        const auto left = gk15(f, s.a, mid);
        const auto right = gk15(f, mid, s.b);
        total += left.value + right.value - s.value;
        err += left.error + right.error - s.error;
        mass += left.l1 + right.l1 - s.l1;
        queue.push(left);
        queue.push(right);
        ++intervals;
    }
    // Densities decay as c / w^2 beyond the cutoff.
    const cd tail = f(cutoff) * cutoff;
    return (total + tail) / constants::two_pi;
}

double cutoff_for(const DerivedParams& d) { return 1e3 * std::max({d.omega_z, d.omega_phi, d.gamma}); }

double rel_err(cd got, cd want) {
    const double scale = std::abs(want);
    return scale > 0 ? std::abs(got - want) / scale : std::abs(got - want);
}

}  // namespace

double analytic_mechanical_spectrum(double omega, double temperature, double gamma_j, double omega_j, Flavor flavor) {
    const double scale = gamma_j / omega_j;
    double kernel = 0;
    switch (flavor) {
        case Flavor::Symmetrized: kernel = scale * omega_coth_expm1(omega, temperature); break;
        case Flavor::Commutator: kernel = 2.0 * scale * omega; break;
        case Flavor::Raw: kernel = scale * (omega + omega_coth_expm1(omega, temperature)); break;
    }
    const double detune = omega_j * omega_j - omega * omega;
    return omega_j * omega_j * kernel / (detune * detune + gamma_j * gamma_j * omega * omega);
}

std::complex<double> sumrule_integrate(const LinearModel& m, const DerivedParams& d, int i, int j,
                                       const SumRuleOptions& opts) {
    auto density = [&](double w) -> cd {
        return output_spectrum(m, w, input_correlation(w, 0.0, d, Flavor::Commutator)).V(i, j);
    };
    return integrate_even_sum(m, cutoff_for(d), density, opts);
}

std::complex<double> symmetrized_integrate(const LinearModel& m, const DerivedParams& d, int i, int j,
                                           double temperature, const SumRuleOptions& opts) {
    auto density = [&](double w) -> cd {
        return output_spectrum(m, w, input_correlation(w, temperature, d, Flavor::Symmetrized)).V(i, j);
    };
    return integrate_even_sum(m, cutoff_for(d), density, opts);
}

BranchCountMap brute_cubic_scan(const DerivedParams& d, double delta_lo, double delta_hi, int delta_points,
                                double power_lo, double power_hi, int power_points, int scan_points) {
    BranchCountMap map;
    auto axis = [](double lo, double hi, int n) {
        std::vector<double> v;
        for (int k = 0; k < n; ++k) v.push_back(n == 1 ? lo : lo + (hi - lo) * k / (n - 1));
        return v;
    };
    map.deltas = axis(delta_lo, delta_hi, delta_points);
    map.powers = axis(power_lo, power_hi, power_points);
    const long double G = static_cast<long double>(d.g_z) * d.g_z / d.omega_z +
                          static_cast<long double>(d.g_phi) * d.g_phi / d.omega_phi;
    const long double g = d.gamma;
    for (double delta : map.deltas) {
        for (double power : map.powers) {
            const long double a_in_sq = power / (static_cast<long double>(constants::hbar) * d.omega_c);
            const long double target = g * a_in_sq;
            if (target == 0) {
                map.counts.push_back(1);
                continue;
            }
            const long double n_max = target / (g * g / 4) * (1 + 1e-9L);
            int changes = 0;
            int prev_sign = -1;  // f(0) = -target
            for (int k = 1; k <= scan_points; ++k) {
                const long double n = n_max * k / scan_points;
                const long double shift = delta - n * G;
                const long double f = n * (g * g / 4 + shift * shift) - target;
                const int sgn = (f > 0) - (f < 0);
                if (sgn != 0 && sgn != prev_sign) {
                    ++changes;
                    prev_sign = sgn;
                }
            }
            map.counts.push_back(changes);
        }
    }
    return map;
}

std::vector<double> characteristic_polynomial(const Eigen::MatrixXd& M) {
    const auto n = M.rows();
    using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    const MatL A = M.cast<long double>();
    std::vector<long double> c(static_cast<std::size_t>(n) + 1, 0.0L);
    c[n] = 1.0L;
    MatL Mk = MatL::Zero(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        Mk = A * Mk + c[n - k + 1] * MatL::Identity(n, n);
        c[n - k] = -(A * Mk).trace() / static_cast<long double>(k);
    }
    return {c.begin(), c.end()};
}

bool routh_hurwitz_stable(const std::vector<double>& asc) {
    const std::size_t n = asc.size() - 1;
    if (n == 0) return true;
    // Routh array rows from descending coefficients.
    std::vector<std::vector<long double>> rows(n + 1, std::vector<long double>(n / 2 + 2, 0.0L));
    for (std::size_t k = 0; k <= n; ++k) rows[k % 2][k / 2] = asc[n - k];
    if (rows[0][0] <= 0) return false;
    for (std::size_t r = 2; r <= n; ++r) {
        const long double pivot = rows[r - 1][0];
        if (pivot <= 0) return false;
        for (std::size_t c = 0; c + 1 < rows[r].size(); ++c) {
            rows[r][c] = (pivot * rows[r - 2][c + 1] - rows[r - 2][0] * rows[r - 1][c + 1]) / pivot;
        }
    }
    for (std::size_t r = 0; r <= n; ++r) {
        if (rows[r][0] <= 0) return false;
    }
    return true;
}

std::vector<OracleReport> run_selfcheck() {
    std::vector<OracleReport> out;
    auto report = [&](std::string name, double computed, double reference, double error, double tol) {
        out.push_back({std::move(name), computed, reference, error, tol, error <= tol});
    };

    PhysicalParams fig2 = PhysicalParams::defaults();
    PhysicalParams dark = fig2;
    dark.input_power = 0.0;

    // Decoupled spectra against the closed form.
    {
        const auto d = derive_params(dark);
        const auto m = build_linear_model(d, steady_state_feedback(d, dark.detuning_value));
        double worst = 0;
        for (int k = 0; k < 1000; ++k) {
            const double w = d.omega_z * (0.9 + 0.2 * (k + 0.5) / 1000.0);
            const double got =
                output_spectrum(m, w, input_correlation(w, 1.0, d, Flavor::Symmetrized)).V(state::z, state::z).real();
            const double want = analytic_mechanical_spectrum(w, 1.0, d.gamma_z, d.omega_z, Flavor::Symmetrized);
            worst = std::max(worst, std::abs(got - want) / want);
        }
        report("decoupled V_zz vs closed form (max rel err)", worst, 0.0, worst, 1e-10);

        const cd zp = sumrule_integrate(m, d, state::z, state::p_z);
        report("decoupled sum rule (z, p_z)", zp.imag(), 1.0, rel_err(zp, cd(0, 1)), 1e-8);

        double vac = 0;
        for (int k = 0; k < 200; ++k) {
            const double w = d.omega_z * (0.5 + (k + 0.5) / 200.0);
            vac = std::max(vac, std::abs(entanglement_measure(m, d, w, 0.0).E - 1.0));
        }
        report("vacuum normalization E = 1", 1.0 + vac, 1.0, vac, 1e-9);
    }
    // Coupled Fig. 2 model.
    {
        const auto d = derive_params(fig2);
        const auto m = build_linear_model(d, steady_state_feedback(d, fig2.detuning_value));
        const cd zp = sumrule_integrate(m, d, state::z, state::p_z);
        const cd pl = sumrule_integrate(m, d, state::phi, state::L_z);
        const cd zl = sumrule_integrate(m, d, state::z, state::L_z);
        report("coupled sum rule (z, p_z)", zp.imag(), 1.0, rel_err(zp, cd(0, 1)), 1e-6);
        report("coupled sum rule (phi, L_z)", pl.imag(), 1.0, rel_err(pl, cd(0, 1)), 1e-6);
        report("coupled sum rule (z, L_z)", std::abs(zl), 0.0, std::abs(zl), 1e-6);

        const auto coeffs = characteristic_polynomial(to_quadrature_basis(m.A) / m.A.cwiseAbs().maxCoeff());
        const bool rh = routh_hurwitz_stable(coeffs);
        report("Routh-Hurwitz agrees with eigenvalue verdict", rh ? 1.0 : 0.0, m.stable ? 1.0 : 0.0,
               rh == m.stable ? 0.0 : 1.0, 0.0);
    }
    // Bistability root finder against the brute-force scan.
    {
        const auto d = derive_params(fig2);
        const auto scan = brute_cubic_scan(d, 0.0, 3.0 * d.gamma, 12, 1e-4, 2e-2, 12, 50000);
        int mismatches = 0;
        for (std::size_t i = 0; i < scan.deltas.size(); ++i) {
            for (std::size_t j = 0; j < scan.powers.size(); ++j) {
                DerivedParams dp = d;
                dp.a_in = std::sqrt(scan.powers[j] / (constants::hbar * d.omega_c));
                const auto branches = steady_state_fixed_detuning(dp, scan.deltas[i]);
                if (static_cast<int>(branches.size()) != scan.at(i, j)) ++mismatches;
            }
        }
        report("cubic branch counts vs brute scan (mismatched cells)", mismatches, 0.0, mismatches, 0.0);
    }
    return out;
}

}  // namespace rovib::oracles
