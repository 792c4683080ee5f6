#include "doctest.h"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "cspin/core_map.hpp"
#include "cspin/quantumness.hpp"

using namespace cspin;

namespace {

// Wootters from the non-Hermitian product rho (sy x sy) rho* (sy x sy)
double wootters(const Eigen::Matrix4cd& rho) {
    Eigen::Matrix2cd sy;
    sy << 0, cplx(0, -1), cplx(0, 1), 0;
    Eigen::Matrix4cd yy;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) yy.block<2, 2>(2 * i, 2 * j) = sy(i, j) * sy;
    const Eigen::Matrix4cd r = rho * yy * rho.conjugate() * yy;
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(r);
    std::array<double, 4> l{};
    for (int i = 0; i < 4; ++i) l[i] = std::sqrt(std::max(0.0, es.eigenvalues()[i].real()));
    std::sort(l.rbegin(), l.rend());
    return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

} // namespace

TEST_CASE("l1 coherence") {
    CHECK(l1_coherence(QubitState::maximally_coherent()) == doctest::Approx(1.0));
    CHECK(l1_coherence(QubitState(0.5, cplx(0.0, 0.3))) == doctest::Approx(0.6));
    CHECK(l1_coherence(QubitState::excited()) == 0.0);
}

TEST_CASE("concurrence of standard states") {
    CHECK(concurrence(TwoQubitState::bell()) == doctest::Approx(1.0));
    CHECK(concurrence(TwoQubitState::werner(0.5)) == doctest::Approx(0.25));
    CHECK(concurrence(TwoQubitState::werner(0.3)) == doctest::Approx(0.0));
    CHECK(concurrence(TwoQubitState::product(QubitState::maximally_coherent(), QubitState(0.3, 0.1))) ==
          doctest::Approx(0.0).epsilon(1e-7));
}

TEST_CASE("concurrence agrees with the non-Hermitian route") {
    for (double p : {0.4, 0.6, 0.9}) {
        const auto w = TwoQubitState::werner(p);
        CHECK(concurrence(w) == doctest::Approx(wootters(w.matrix())).epsilon(1e-10));
    }
}

TEST_CASE("Choi concurrence and the factorization law") {
    ModelParams p;
    p.epsilon = 0.3;
    p.n_bath = 4;
    p.temperature = Temperature(0.5);
    for (double t : {0.5, 2.0, 6.0}) {
        const auto c = map_coefficients(p, t);
        const auto chi = TwoQubitState::from_choi(choi_state(c));
        CHECK(concurrence(chi) == doctest::Approx(choi_concurrence(c)).epsilon(1e-9));
        CHECK(wootters(chi.matrix()) == doctest::Approx(choi_concurrence(c)).epsilon(1e-9));
        CHECK(entanglement_evolution(p, 0.6, t) == doctest::Approx(0.6 * choi_concurrence(c)));
        CHECK(coherence_evolution(p, 0.8, t) == doctest::Approx(0.8 * std::abs(c.delta)));
    }
}

TEST_CASE("input validation") {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity() * 0.3;
    CHECK_THROWS(TwoQubitState(m));
    CHECK_THROWS(TwoQubitState::werner(1.5));
    CHECK_THROWS(coherence_evolution(ModelParams{}, 1.5, 1.0));
}

TEST_CASE("channel on one half of a pure state scales its concurrence") {
    ModelParams p;
    p.epsilon = 0.25;
    p.n_bath = 3;
    p.temperature = Temperature(0.2);
    const auto c = map_coefficients(p, 1.7);
    const auto ks = kraus_operators(c);
    const double a = 0.4;
    Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
    psi(0) = std::cos(a);
    psi(3) = std::sin(a);
    const Eigen::Matrix4cd rho = psi * psi.adjoint();
    Eigen::Matrix4cd out = Eigen::Matrix4cd::Zero();
    for (const auto& k : ks.ops) {
        Eigen::Matrix4cd kk = Eigen::Matrix4cd::Zero();
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) kk.block<2, 2>(2 * i, 2 * j) = k(i, j) * Eigen::Matrix2cd::Identity();
        out += kk * rho * kk.adjoint();
    }
    CHECK(wootters(out) == doctest::Approx(std::sin(2 * a) * choi_concurrence(c)).epsilon(1e-9));
}
