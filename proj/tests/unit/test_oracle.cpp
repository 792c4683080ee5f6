#include "doctest.h"

#include <cmath>

#include "cspin/core_map.hpp"
#include "cspin/oracle.hpp"

using namespace cspin;

TEST_CASE("joint Hamiltonian conserves the excitation number") {
    ModelParams p;
    p.epsilon = 0.6;
    p.n_bath = 5;
    CHECK(oracle::excitation_commutator_norm(p) < 1e-12);
}

TEST_CASE("joint unitary reproduces the closed-form map") {
    ModelParams p;
    p.omega0 = 1.4;
    p.omega = 0.7;
    p.epsilon = 0.5;
    p.n_bath = 6;
    p.temperature = Temperature(0.8);
    for (double t : {1.0, 7.5, 31.0}) {
        const auto c = map_coefficients(p, t);
        const auto j = oracle::joint_map_coefficients(p, t);
        CHECK(std::abs(c.alpha - j.alpha) < 1e-10);
        CHECK(std::abs(c.beta - j.beta) < 1e-10);
        CHECK(std::abs(c.delta - j.delta) < 1e-10);
        const QubitState rho0(0.3, cplx(0.2, 0.1));
        const auto a = oracle::joint_unitary_evolve(p, rho0, t);
        const auto b = apply_map(c, rho0);
        CHECK(std::abs(a.rho11() - b.rho11()) < 1e-10);
        CHECK(std::abs(a.rho12() - b.rho12()) < 1e-10);
    }
}

TEST_CASE("block amplitudes stay normalized") {
    ModelParams p;
    p.epsilon = 1.0;
    p.n_bath = 3;
    const auto b = oracle::integrate_blocks(p, 2, 20.0);
    CHECK(b.unitarity_defect_excited() < 1e-10);
    CHECK(b.unitarity_defect_ground() < 1e-10);
    CHECK(b.max_unitarity_defect < 1e-10);
}

TEST_CASE("oracle grid is seeded and covers the requested set") {
    const auto a = oracle::oracle_grid(50, 7), b = oracle::oracle_grid(50, 7);
    REQUIRE(a.size() == 50);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].time == b[i].time);
        CHECK(a[i].params.epsilon == b[i].params.epsilon);
        CHECK(a[i].time >= 0.0);
        CHECK(a[i].time <= 50.0);
    }
    CHECK_THROWS_AS(oracle::joint_unitary_evolve([] {
        ModelParams p;
        p.n_bath = oracle::kMaxJointBath + 1;
        return p;
    }(), QubitState::excited(), 1.0), std::length_error);
}
