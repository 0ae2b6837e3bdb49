#include "rovib/linear_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rovib/errors.hpp"

namespace rovib {

namespace {
constexpr cplx I1{0.0, 1.0};
}

double LinearModel::max_real_eigenvalue() const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& ev : eigenvalues) m = std::max(m, ev.real());
    return m;
}

LinearModel build_linear_model(const DerivedParams& d, const SteadyState& s) {
    using namespace state;
    LinearModel m;
    auto& A = m.A;
    const double Delta = s.effective_detuning;
    const double Gz = s.a_s * d.g_z;
    const double Gphi = s.a_s * d.g_phi;

    A(a, a) = -(I1 * Delta + d.gamma / 2.0);
    A(a, z) = I1 * Gz;
    A(a, phi) = -I1 * Gphi;
    A(a_dag, a_dag) = -(-I1 * Delta + d.gamma / 2.0);
    A(a_dag, z) = -I1 * Gz;
    A(a_dag, phi) = I1 * Gphi;

    A(z, p_z) = d.omega_z;
    A(p_z, z) = -d.omega_z;
    A(p_z, a) = Gz;
    A(p_z, a_dag) = Gz;
    A(p_z, p_z) = -d.gamma_z;

    A(phi, L_z) = d.omega_phi;
    A(L_z, phi) = -d.omega_phi;
    A(L_z, a) = -Gphi;
    A(L_z, a_dag) = -Gphi;
    A(L_z, L_z) = -d.gamma_phi;

    const double sqrt_gamma = std::sqrt(d.gamma);
    m.B(a, noise::a_in) = sqrt_gamma;
    m.B(a_dag, noise::a_in_dag) = sqrt_gamma;
    m.B(p_z, noise::eps_z) = 1.0;
    m.B(L_z, noise::eps_phi) = 1.0;

    Eigen::ComplexEigenSolver<DriftMatrix> solver(A, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::NumericalFailure, "eigenvalue solver failed");
    std::vector<cplx> evs(solver.eigenvalues().begin(), solver.eigenvalues().end());
    std::sort(evs.begin(), evs.end(), [](const cplx& x, const cplx& y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    std::copy(evs.begin(), evs.end(), m.eigenvalues.begin());
    m.stable = std::all_of(evs.begin(), evs.end(), [](const cplx& ev) { return ev.real() < 0; });
    return m;
}

TransferMatrix transfer(const LinearModel& m, double omega) {
    if (!m.stable) {
        throw Error(ErrorCode::UnstableSystem,
                    "drift matrix has an eigenvalue with non-negative real part; spectra are undefined");
    }
    const DriftMatrix M = -I1 * omega * DriftMatrix::Identity() - m.A;
    Eigen::FullPivLU<DriftMatrix> lu(M);
    if (!lu.isInvertible() || lu.rcond() < 1e-15) {
        throw Error(ErrorCode::SingularMatrix, "(-i omega I - A) is numerically singular at omega = " +
                                                   std::to_string(omega));
    }
    TransferMatrix t;
    t.omega = omega;
    t.T = lu.solve(m.B);
    // One step of iterative refinement; the residual bound is the contract.
    const InputMatrix r = m.B - M * t.T;
    t.T += lu.solve(r);
    const double resid = (M * t.T - m.B).cwiseAbs().maxCoeff();
    if (resid >= 1e-10 * m.B.cwiseAbs().maxCoeff()) {
        throw Error(ErrorCode::NumericalFailure, "transfer solve residual " + std::to_string(resid) + " too large");
    }
    return t;
}

Eigen::Matrix<double, kStateDim, kStateDim> to_quadrature_basis(const DriftMatrix& A) {
    DriftMatrix P = DriftMatrix::Identity();
    P(0, 0) = 1.0;
    P(0, 1) = 1.0;
    P(1, 0) = -I1;
    P(1, 1) = I1;
    const DriftMatrix Aq = P * A * P.inverse();
    return Aq.real();
}

}  // namespace rovib
