#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

#include "rovib/model_params.hpp"
#include "rovib/steady_state.hpp"

namespace rovib {

using cplx = std::complex<double>;

// State order (da, da^dag, dz, dp_z, dphi, dL_z); noise order
// (da_in, da_in^dag, eps_z, eps_phi).
inline constexpr int kStateDim = 6;
inline constexpr int kNoiseDim = 4;

namespace state {
inline constexpr int a = 0, a_dag = 1, z = 2, p_z = 3, phi = 4, L_z = 5;
}
namespace noise {
inline constexpr int a_in = 0, a_in_dag = 1, eps_z = 2, eps_phi = 3;
}

using DriftMatrix = Eigen::Matrix<cplx, kStateDim, kStateDim>;
using InputMatrix = Eigen::Matrix<cplx, kStateDim, kNoiseDim>;
using StateVector = Eigen::Matrix<double, kStateDim, 1>;

struct LinearModel {
    DriftMatrix A = DriftMatrix::Zero();
    InputMatrix B = InputMatrix::Zero();
    std::array<cplx, kStateDim> eigenvalues{};
    bool stable = false;

    double max_real_eigenvalue() const;
};

struct TransferMatrix {
    double omega = 0;
    InputMatrix T = InputMatrix::Zero();
};

LinearModel build_linear_model(const DerivedParams& d, const SteadyState& s);

// T(omega) = (-i omega I - A)^{-1} B under f(t) = int dw/2pi e^{-iwt} f(w).
// Refuses unstable models.
TransferMatrix transfer(const LinearModel& m, double omega);

// Same drift matrix in the real basis (dX, dY, dz, dp_z, dphi, dL_z) with
// dX = da + da^dag and dY = -i(da - da^dag).
Eigen::Matrix<double, kStateDim, kStateDim> to_quadrature_basis(const DriftMatrix& A);

}  // namespace rovib
