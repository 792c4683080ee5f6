// channel.hpp: Choi-Jamiolkowski state and Kraus representation of the qubit map

#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "cspin/core_map.hpp"

namespace cspin {

// 4x4 Choi state (1 x Phi)(|Phi+><Phi+|), basis index 2*ancilla + system with
// level 0 = |1> (excited) and level 1 = |0> (ground).
struct ChoiMatrix {
    Eigen::Matrix4cd m{Eigen::Matrix4cd::Zero()};

    double min_eigenvalue() const;
    // Partial trace over the system factor; I/2 for a trace-preserving map.
    Eigen::Matrix2cd ancilla_marginal() const;
    double hermiticity_defect() const;
};

// Throws CpViolation (carrying the most negative eigenvalue) for eigenvalues < -1e-12.
ChoiMatrix choi_state(const MapCoefficients& coeffs);

struct KrausSet {
    // K1 ~ sqrt(beta) |1><0|, K2 ~ sqrt(alpha) |0><1|, K3/K4 diagonal (X1 >= X2)
    std::array<Eigen::Matrix2cd, 4> ops{};
    double x1{0.0};
    double x2{0.0};
    double y1{0.0};
    double y2{0.0};
    double theta{0.0}; // arg Delta in (-pi, pi]

    Eigen::Matrix2cd completeness() const;      // sum K^dagger K
    double completeness_residual() const;        // max-abs of (sum K^dagger K - I)
    ChoiMatrix choi() const;                     // 1/2 sum_k vec(K_k) vec(K_k)^dagger
};

// Kraus set from the eigensystem of the Choi state. Each eigenvector is fixed by making
// its largest-magnitude component real and positive.
KrausSet kraus_operators(const MapCoefficients& coeffs);

// Closed-form Kraus set in terms of X_{1,2}, Y_{1,2}, theta. K4 carries the phase
// theta + pi (i.e. -Y2 e^{i theta}); with +Y2 the set would be complete but would not
// reproduce the coherence factor. Requires |Delta| > 1e-10.
KrausSet kraus_closed_form(const MapCoefficients& coeffs);

// Throws std::domain_error when the set is not complete to 1e-10.
QubitState apply_kraus(const KrausSet& ks, const QubitState& rho);

struct CpIntegrals {
    double int_dis{0.0};
    double int_abs{0.0};
    double int_deph{0.0};
    // grid cells dropped because a rate pole lies inside (or within 1e-3 of) them
    std::vector<std::pair<double, double>> excluded;
    bool all_non_negative(double tol = 1e-8) const noexcept {
        return int_dis >= -tol && int_abs >= -tol && int_deph >= -tol;
    }
};

// Trapezoidal integrals of the time-local rates from 0 to t.
CpIntegrals cp_divisibility_integrals(const ModelParams& params, double t, double grid_step);

} // namespace cspin
