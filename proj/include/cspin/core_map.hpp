// core_map.hpp: closed-form reduced dynamical map of the central qubit
//
// The qubit density matrix is written in the basis (|1>, |0>) = (excited, ground):
//
//     rho = [[rho11, rho12], [conj(rho12), 1 - rho11]]
//
// and the bath-traced evolution acts as
//
//     rho11(t) = rho11(0) (1 - alpha(t)) + rho22(0) beta(t)
//     rho12(t) = rho12(0) Delta(t)
//
// with alpha, beta, Delta finite thermal sums over the boson levels n = 0..N of the
// Holstein-Primakoff bath mode. Every level contributes a two-state Rabi problem:
// |1,n> <-> |0,n+1> at frequency eta(n) and |0,n> <-> |1,n-1> at eta'(n) = eta(n-1).

#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "cspin/model.hpp"

namespace cspin {

struct MapCoefficients {
    double alpha{0.0};
    double beta{0.0};
    cplx delta{1.0, 0.0};
    double time{0.0};

    static MapCoefficients identity() { return {}; }

    // (1 - alpha)(1 - beta) - |Delta|^2 ; non-negative iff the Choi matrix is PSD
    // (given alpha, beta in [0, 1]).
    double cp_margin() const noexcept;
    bool is_cp(double tol = 1e-12) const noexcept;
};

// Raised when coefficients would produce a non-positive channel.
class CpViolation : public std::domain_error {
public:
    CpViolation(const std::string& what, double most_negative_eigenvalue)
        : std::domain_error(what), most_negative_(most_negative_eigenvalue) {}
    double most_negative_eigenvalue() const noexcept { return most_negative_; }

private:
    double most_negative_;
};

class QubitState {
public:
    QubitState() = default;
    QubitState(double rho11, cplx rho12) : rho11_(rho11), rho12_(rho12) {}

    static QubitState excited() { return {1.0, 0.0}; }
    static QubitState ground() { return {0.0, 0.0}; }
    static QubitState maximally_mixed() { return {0.5, 0.0}; }
    static QubitState maximally_coherent() { return {0.5, 0.5}; }
    // Bloch vector (x, y, z) with z = rho11 - rho22; |r| <= 1.
    static QubitState from_bloch(double x, double y, double z);
    // Hermitian part of a 2x2 matrix; trace must be 1.
    static QubitState from_matrix(const Eigen::Matrix2cd& m);

    double rho11() const noexcept { return rho11_; }
    double rho22() const noexcept { return 1.0 - rho11_; }
    cplx rho12() const noexcept { return rho12_; }
    cplx rho21() const noexcept { return std::conj(rho12_); }

    Eigen::Matrix2cd matrix() const;
    Eigen::Vector3d bloch() const;
    // Eigenvalues (larger first): 1/2 (1 +- sqrt((rho11 - rho22)^2 + 4|rho12|^2)).
    std::pair<double, double> eigenvalues() const noexcept;
    // rho11 rho22 - |rho12|^2 >= -tol and rho11 in [-tol, 1 + tol]
    bool is_valid(double tol = 1e-12) const noexcept;

private:
    double rho11_{1.0};
    cplx rho12_{0.0, 0.0};
};

struct CoefficientRates {
    double d_alpha{0.0};
    double d_beta{0.0};
    cplx d_delta{0.0, 0.0};
};

// Precomputed level tables for repeated evaluation at many times.
class ReducedMap {
public:
    explicit ReducedMap(const ModelParams& params);

    const ModelParams& params() const noexcept { return params_; }
    MapCoefficients at(double t) const;
    CoefficientRates derivatives(double t) const;
    // Coefficients and their time derivatives from a single pass over the levels.
    std::pair<MapCoefficients, CoefficientRates> evaluate(double t) const;

    // Largest Rabi frequency over the levels; sets the fastest oscillation.
    double eta_max() const noexcept { return eta_max_; }
    const std::vector<double>& weights() const noexcept { return weight_; }
    // eta(m) for m = -1..N; eta(-1) = |omega0 - omega/2N| is eta'(0).
    double eta_of(int m) const { return eta_[static_cast<std::size_t>(m + 1)]; }

private:
    ModelParams params_;
    std::vector<double> weight_;   // w_n
    std::vector<double> eta_;      // eta(m), m = -1..N
    std::vector<double> coupling_; // 4 eps^2 (m+1)(1 - m/2N), m = -1..N
    double eta_max_{0.0};
};

MapCoefficients map_coefficients(const ModelParams& params, double t);
CoefficientRates coefficient_derivatives(const ModelParams& params, double t);

// Throws CpViolation when the coefficients fail the CP test at tolerance 1e-12.
QubitState apply_map(const MapCoefficients& coeffs, const QubitState& rho0);

} // namespace cspin
