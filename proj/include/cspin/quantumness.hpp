// quantumness.hpp: l1 coherence and Wootters concurrence under the map

#pragma once

#include <Eigen/Dense>

#include "cspin/channel.hpp"
#include "cspin/core_map.hpp"
#include "cspin/model.hpp"

namespace cspin {

// Density matrix of system (first factor) and ancilla (second factor), basis
// index 2*s + a. Construction checks Hermiticity, unit trace and positivity.
class TwoQubitState {
public:
    explicit TwoQubitState(const Eigen::Matrix4cd& m);

    static TwoQubitState bell();                       // (|11> + |00>)/sqrt(2)
    static TwoQubitState werner(double p);             // p bell + (1 - p) I/4
    static TwoQubitState product(const QubitState& s, const QubitState& a);
    static TwoQubitState from_choi(const ChoiMatrix& chi);

    const Eigen::Matrix4cd& matrix() const noexcept { return m_; }

private:
    Eigen::Matrix4cd m_;
};

// 2 |rho12|
double l1_coherence(const QubitState& rho);

// c0 |Delta(t)|
double coherence_evolution(const ReducedMap& map, double c0, double t);
double coherence_evolution(const ModelParams& params, double c0, double t);

// Wootters concurrence. Uses the Hermitian form sqrt(rho) rho~ sqrt(rho), whose
// eigenvalues are those of rho rho~.
double concurrence(const TwoQubitState& rho);

// max(0, |Delta| - sqrt(alpha beta)): concurrence of the Choi state.
double choi_concurrence(const MapCoefficients& coeffs);

// e0 max(0, |Delta| - sqrt(alpha beta))
double entanglement_evolution(const ReducedMap& map, double e0, double t);
double entanglement_evolution(const ModelParams& params, double e0, double t);

} // namespace cspin
