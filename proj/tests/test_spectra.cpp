#include <doctest.h>

#include <cmath>
#include <vector>

#include "rovib/constants.hpp"
#include "rovib/errors.hpp"
#include "rovib/oracles.hpp"
#include "rovib/spectra.hpp"
#include "rovib/steady_state.hpp"

using namespace rovib;
using doctest::Approx;

namespace {

struct Setup {
    DerivedParams d;
    LinearModel m;
};

Setup make(const PhysicalParams& p) {
    const auto d = derive_params(p);
    return {d, build_linear_model(d, working_point(p, d))};
}

Setup decoupled() {
    auto p = PhysicalParams::defaults();
    p.input_power = 0;
    return make(p);
}

StateVector unit(int i) {
    StateVector v = StateVector::Zero();
    v(i) = 1;
    return v;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out;
    for (int k = 0; k < n; ++k) out.push_back(lo + (hi - lo) * k / (n - 1));
    return out;
}

OutputSpectralMatrix sym_at(const Setup& s, double w, double T) {
    return output_spectrum(s.m, w, input_correlation(w, T, s.d, Flavor::Symmetrized));
}

}  // namespace

TEST_CASE("decoupled position spectrum matches the closed form") {
    const auto s = decoupled();
    for (double T : {0.0, 1.0}) {
        for (double w : linspace(0.5 * s.d.omega_z, 1.5 * s.d.omega_z, 301)) {
            const double want = oracles::analytic_mechanical_spectrum(w, T, s.d.gamma_z, s.d.omega_z, Flavor::Symmetrized);
            const cplx got = sym_at(s, w, T).V(state::z, state::z);
            CHECK(std::abs(got - want) <= 1e-10 * want);
        }
    }
}

TEST_CASE("decoupled optical-mechanical cross entries vanish") {
    const auto s = decoupled();
    const auto V = sym_at(s, s.d.omega_z, 1.0).V;
    for (int i : {state::a, state::a_dag}) {
        for (int j : {state::z, state::p_z, state::phi, state::L_z}) {
            CHECK(V(i, j) == cplx{});
            CHECK(V(j, i) == cplx{});
        }
    }
    CHECK(V(state::z, state::phi) == cplx{});
}

TEST_CASE("symmetrized spectrum is Hermitian positive in the real basis") {
    const auto s = make(PhysicalParams::defaults());
    OutputMatrix P = OutputMatrix::Identity();
    P(0, 0) = 1.0;
    P(0, 1) = 1.0;
    P(1, 0) = cplx{0, -1};
    P(1, 1) = cplx{0, 1};
    for (double w : {1e4, 5.9e6, s.d.omega_phi, s.d.omega_phi + 3.0, 2e7}) {
        const OutputMatrix W = P * sym_at(s, w, 1.0).V * P.transpose();
        const double scale = W.cwiseAbs().maxCoeff();
        CHECK((W - W.adjoint()).cwiseAbs().maxCoeff() <= 1e-9 * scale);
        Eigen::SelfAdjointEigenSolver<OutputMatrix> es(0.5 * (W + W.adjoint()));
        CHECK(es.eigenvalues().minCoeff() >= -1e-9 * scale);
    }
}

TEST_CASE("raw spectrum splits into symmetrized plus half commutator") {
    const auto s = make(PhysicalParams::defaults());
    const double w = 0.999 * s.d.omega_phi;
    const auto raw = output_spectrum(s.m, w, input_correlation(w, 1.0, s.d, Flavor::Raw)).V;
    const auto sym = output_spectrum(s.m, w, input_correlation(w, 1.0, s.d, Flavor::Symmetrized)).V;
    const auto com = output_spectrum(s.m, w, input_correlation(w, 1.0, s.d, Flavor::Commutator)).V;
    CHECK((raw - sym - 0.5 * com).cwiseAbs().maxCoeff() <= 1e-12 * raw.cwiseAbs().maxCoeff());
}

TEST_CASE("output spectrum rejects a mismatched input frequency") {
    const auto s = decoupled();
    CHECK_THROWS_AS(output_spectrum(s.m, 1e6, input_correlation(2e6, 1.0, s.d, Flavor::Raw)), Error);
}

TEST_CASE("quadrature densities") {
    const auto s = decoupled();
    const double w = 1.0001 * s.d.omega_z;
    const auto Vp = sym_at(s, w, 1.0);
    const auto Vm = sym_at(s, -w, 1.0);
    const double rz = quadrature_density(Vp, Vm, unit(state::z));
    CHECK(rz == Approx(0.5 * Vp.V(state::z, state::z).real()).epsilon(1e-12));
    CHECK(quadrature_density(Vp, Vm, StateVector::Zero()) == 0.0);
    CHECK(quadrature_density(Vp, Vm, kUCoeffs) == Approx(2 * rz).epsilon(1e-12));

    const auto Kp = output_spectrum(s.m, w, input_correlation(w, 1.0, s.d, Flavor::Commutator));
    CHECK_THROWS_AS(quadrature_density(Kp, Vm, unit(state::z)), Error);
    try {
        quadrature_correlation(Kp, Vm, unit(state::z), unit(state::p_z));
        FAIL("expected FlavorMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::FlavorMismatch);
    }
    CHECK_THROWS_AS(quadrature_correlation(Vp, Vp, unit(state::z), unit(state::z)), Error);
}

TEST_CASE("vacuum normalization") {
    auto p = PhysicalParams::defaults();
    p.input_power = 0;
    p.temperature = 0;
    const auto s = make(p);
    for (double w : linspace(0.9 * s.d.omega_z, 1.1 * s.d.omega_z, 200)) {
        CHECK(entanglement_measure(s.m, s.d, w, 0.0).E == Approx(1.0).epsilon(1e-9));
    }
    CHECK(entanglement_measure(s.m, s.d, -s.d.omega_z, 0.0).E == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("decoupled modes never witness entanglement") {
    const auto s = decoupled();
    for (double T : {0.1, 1.0, 10.0, 300.0}) {
        for (double w : linspace(0.95 * s.d.omega_z, 1.05 * s.d.omega_z, 101)) {
            CHECK(entanglement_measure(s.m, s.d, w, T).E >= 1 - 1e-9);
        }
    }
}

TEST_CASE("design point frozen entanglement values") {
    const auto s = make(PhysicalParams::defaults());
    const double wp = s.d.omega_phi;
    const auto a = entanglement_measure(s.m, s.d, wp, 1.0);
    CHECK(a.E == Approx(2.3665487668161553).epsilon(1e-7));
    CHECK(a.V_Ru == Approx(2.2594251731788972e-06).epsilon(1e-7));
    CHECK(a.V_Rv == Approx(6632.5018658335803).epsilon(1e-7));
    CHECK(a.D == Approx(0.07957560383623434).epsilon(1e-7));
    CHECK(entanglement_measure(s.m, s.d, wp + constants::two_pi * 100, 1.0).E ==
          Approx(30382.469388808458).epsilon(1e-7));
    CHECK(entanglement_measure(s.m, s.d, 0.97 * wp, 1.0).E == Approx(15.064429679704419).epsilon(1e-7));
    CHECK(entanglement_measure(s.m, s.d, wp, 0.1).E == Approx(0.10438962092666727).epsilon(1e-7));
    CHECK_THROWS_AS(entanglement_measure(s.m, s.d, 0.0, 1.0), Error);
}

TEST_CASE("curve evaluation is independent of the thread count") {
    const auto s = make(PhysicalParams::defaults());
    const auto grid = spectrum_grid(s.d, 0.95 * s.d.omega_phi, 1.05 * s.d.omega_phi, 200, 10);
    const auto one = entanglement_curve(s.m, s.d, grid, 1.0, 1);
    const auto many = entanglement_curve(s.m, s.d, grid, 1.0, 3);
    REQUIRE(one.size() == many.size());
    for (std::size_t i = 0; i < one.size(); ++i) CHECK(one[i].E == many[i].E);
}

TEST_CASE("symmetric system peaks exactly at the common frequency") {
    const auto s = make(PhysicalParams::defaults());
    const auto grid = spectrum_grid(s.d, 0.95 * s.d.omega_phi, 1.05 * s.d.omega_phi, 400, 40);
    auto curve = entanglement_curve(s.m, s.d, grid, 0.1);
    const std::vector<double> res{s.d.omega_z, s.d.omega_phi};
    const auto peak = find_peak(curve, res, s.d.gamma_z);
    CHECK(std::abs(peak.omega - s.d.omega_z) <= peak.grid_step);
    CHECK(peak.E <= peak.E_grid);
    CHECK(peak.E < 1);
    std::reverse(curve.begin(), curve.end());
    const auto rev = find_peak(curve, res, s.d.gamma_z);
    CHECK(rev.omega == peak.omega);
    CHECK(rev.E == peak.E);

    const auto iv = entangled_intervals(curve);
    CHECK(std::any_of(iv.begin(), iv.end(),
                      [&](const auto& r) { return r.first < s.d.omega_z && r.second > s.d.omega_z; }));
}

TEST_CASE("coarse grids are rejected near a resonance") {
    const auto s = make(PhysicalParams::defaults());
    const auto grid = linspace(0.95 * s.d.omega_phi, 1.05 * s.d.omega_phi, 101);
    const auto curve = entanglement_curve(s.m, s.d, grid, 1.0);
    const std::vector<double> res{s.d.omega_phi};
    try {
        find_peak(curve, res, s.d.gamma_phi);
        FAIL("expected GridTooCoarse");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::GridTooCoarse);
    }
    CHECK_NOTHROW(find_peak(curve));
    CHECK_THROWS_AS(find_peak(std::vector<SpectrumPoint>{}), Error);
}

TEST_CASE("parabolic refinement recovers a quadratic minimum") {
    std::vector<SpectrumPoint> pts;
    for (double w : linspace(0, 10, 11)) pts.push_back({w, 0, 0, 1, 2 + (w - 4.3) * (w - 4.3)});
    const auto peak = find_peak(pts);
    CHECK(peak.omega == Approx(4.3).epsilon(1e-12));
    CHECK(peak.E == Approx(2.0).epsilon(1e-12));
    CHECK(peak.E_grid == Approx(2.09));
    CHECK(peak.grid_step == Approx(1.0));
}

TEST_CASE("entangled intervals interpolate the crossings") {
    std::vector<SpectrumPoint> pts;
    for (double w : linspace(0, 4, 5)) pts.push_back({w, 0, 0, 1, std::abs(w - 2) * 0.5 + 0.5});
    const auto iv = entangled_intervals(pts);
    REQUIRE(iv.size() == 1);
    CHECK(iv[0].first == Approx(1.0));
    CHECK(iv[0].second == Approx(3.0));
}

TEST_CASE("spectrum grid contains the resonances and their mean") {
    auto p = PhysicalParams::defaults();
    p.omega_z -= constants::two_pi * 10;
    const auto d = derive_params(p);
    const auto g = spectrum_grid(d, 0.95 * d.omega_phi, 1.05 * d.omega_phi, 400, 40);
    CHECK(std::is_sorted(g.begin(), g.end()));
    CHECK(std::adjacent_find(g.begin(), g.end()) == g.end());
    const double mean = 0.5 * (d.omega_z + d.omega_phi);
    for (double c : {d.omega_z, d.omega_phi, mean}) {
        CHECK(std::binary_search(g.begin(), g.end(), c));
        const auto it = std::lower_bound(g.begin(), g.end(), c);
        CHECK(*(it + 1) - *it <= d.gamma_z / 40 * (1 + 1e-6));
    }
    CHECK(g.front() >= 0.95 * d.omega_phi);
    CHECK(g.back() <= 1.05 * d.omega_phi);
    const auto neg = spectrum_grid(d, -1e6, 1e6, 11);
    CHECK(std::find(neg.begin(), neg.end(), 0.0) == neg.end());
    CHECK_THROWS_AS(spectrum_grid(d, 2, 1, 10), Error);
}
