#include "cspin/quantumness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

namespace cspin {

namespace {

void check_fraction(double x, const char* name) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
}

} // namespace

TwoQubitState::TwoQubitState(const Eigen::Matrix4cd& m) : m_(m) {
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("two-qubit state is not Hermitian");
    if (std::abs(m.trace() - 1.0) > 1e-10) throw std::invalid_argument("two-qubit state trace is not 1");
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()[0] < -1e-12) throw std::invalid_argument("two-qubit state is not positive");
}

TwoQubitState TwoQubitState::bell() {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = m(0, 3) = m(3, 0) = m(3, 3) = 0.5;
    return TwoQubitState(m);
}

TwoQubitState TwoQubitState::werner(double p) {
    check_fraction(p, "Werner weight");
    return TwoQubitState(p * bell().matrix() + (1.0 - p) * 0.25 * Eigen::Matrix4cd::Identity());
}

TwoQubitState TwoQubitState::product(const QubitState& s, const QubitState& a) {
    return TwoQubitState(Eigen::kroneckerProduct(s.matrix(), a.matrix()));
}

TwoQubitState TwoQubitState::from_choi(const ChoiMatrix& chi) {
    // Choi index is 2*ancilla + system; swap the factors
    static constexpr int perm[4] = {0, 2, 1, 3};
    Eigen::Matrix4cd m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(perm[i], perm[j]) = chi.m(i, j);
    return TwoQubitState(m);
}

double l1_coherence(const QubitState& rho) { return 2.0 * std::abs(rho.rho12()); }

double coherence_evolution(const ReducedMap& map, double c0, double t) {
    check_fraction(c0, "initial coherence");
    return c0 * std::abs(map.at(t).delta);
}

double coherence_evolution(const ModelParams& params, double c0, double t) {
    return coherence_evolution(ReducedMap(params), c0, t);
}

double concurrence(const TwoQubitState& state) {
    const Eigen::Matrix4cd& rho = state.matrix();
    Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
    yy(0, 3) = yy(3, 0) = -1.0;
    yy(1, 2) = yy(2, 1) = 1.0;
    const Eigen::Matrix4cd flipped = yy * rho.conjugate() * yy;

    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
    Eigen::Vector4d root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::Matrix4cd sq = es.eigenvectors() * root.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
    Eigen::Matrix4cd r = sq * flipped * sq;
    r = 0.5 * (r + r.adjoint()).eval();
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> er(r, Eigen::EigenvaluesOnly);

    Eigen::Vector4d lam = er.eigenvalues();
    for (int i = 0; i < 4; ++i) lam[i] = lam[i] < 0.0 ? 0.0 : std::sqrt(lam[i]);
    std::sort(lam.data(), lam.data() + 4, std::greater<>());
    return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

double choi_concurrence(const MapCoefficients& c) {
    return std::max(0.0, std::abs(c.delta) - std::sqrt(std::max(0.0, c.alpha * c.beta)));
}

double entanglement_evolution(const ReducedMap& map, double e0, double t) {
    check_fraction(e0, "initial entanglement");
    return e0 * choi_concurrence(map.at(t));
}

double entanglement_evolution(const ModelParams& params, double e0, double t) {
    return entanglement_evolution(ReducedMap(params), e0, t);
}

} // namespace cspin
