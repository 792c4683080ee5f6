// oracle.hpp: brute-force references for the closed-form map
//
// Two routes independent of the closed forms in core_map:
//  * per-level integration of the 2x2 amplitude equations of the Rabi blocks
//    (A1, B1) for |1,n> and (C1, D1) for |0,n>, followed by the thermal trace;
//  * exact evolution of the full system+boson Hamiltonian by dense diagonalization,
//    followed by a partial trace over the bath mode.

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "cspin/core_map.hpp"
#include "cspin/model.hpp"

namespace cspin::oracle {

struct BlockAmplitudes {
    int level{0};
    double time{0.0};
    cplx a1{1.0, 0.0};
    cplx b1{0.0, 0.0};
    cplx c1{1.0, 0.0};
    cplx d1{0.0, 0.0};
    // max over accepted steps of | |A1|^2 + (n+1)|B1|^2 - 1 | and | |C1|^2 + n|D1|^2 - 1 |
    double max_unitarity_defect{0.0};

    double unitarity_defect_excited() const noexcept;
    double unitarity_defect_ground() const noexcept;
};

BlockAmplitudes integrate_blocks(const ModelParams& params, int n, double t, double tol = 1e-12);

// alpha = sum_n (n+1)|B1|^2 w_n, beta = sum_n n|D1|^2 w_n, Delta = sum_n A1 conj(C1) w_n.
MapCoefficients assemble_map_from_blocks(const ModelParams& params, double t, double tol = 1e-12);

// Largest bath size accepted by the dense joint evolution.
inline constexpr int kMaxJointBath = 64;

// Joint Hamiltonian on (system) x (boson levels 0..N+1). Basis index s*(N+2) + n with
// s = 0 for |1> and s = 1 for |0>. Level N+1 carries no thermal weight but is the
// partner of |1,N> under the exchange coupling.
Eigen::MatrixXcd joint_hamiltonian(const ModelParams& params);

// Frobenius norm of [H, sigma_z/2 + b^dagger b].
double excitation_commutator_norm(const ModelParams& params);

// Throws std::length_error for N > kMaxJointBath.
QubitState joint_unitary_evolve(const ModelParams& params, const QubitState& rho0, double t);

// alpha, beta, Delta read off the reduced states of |1>, |0> and (|1> + |0>)/sqrt(2)
// under one joint propagator.
MapCoefficients joint_map_coefficients(const ModelParams& params, double t);

struct OraclePoint {
    ModelParams params;
    double time{0.0};
    double block_deviation{0.0}; // max |closed - block| over alpha, beta, Delta
    double joint_deviation{0.0}; // same against the joint evolution; NaN when N is too large
    double unitarity_defect{0.0};
};

// Seeded random grid: N in {1, 2, 5, 10}, T in {0.1, 1, 10, inf}, eps in {0.1, 0.5, 1},
// omega0, omega uniform in [0.5, 2], t uniform in [0, 50].
std::vector<OraclePoint> oracle_grid(int points, unsigned long seed);

// Fills the deviation fields; block tolerance as in integrate_blocks.
void evaluate_oracle_point(OraclePoint& point, double block_tol = 1e-12);

} // namespace cspin::oracle
