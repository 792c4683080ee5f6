#include "doctest.h"

#include <cmath>

#include "cspin/core_map.hpp"
#include "cspin/oracle.hpp"

using namespace cspin;

namespace {

ModelParams sample(int n, double temp, double eps) {
    ModelParams p;
    p.omega0 = 1.1;
    p.omega = 0.9;
    p.epsilon = eps;
    p.n_bath = n;
    p.temperature = Temperature(temp);
    return p;
}

} // namespace

TEST_CASE("identity at t = 0") {
    const auto c = map_coefficients(sample(4, 1.0, 0.7), 0.0);
    CHECK(c.alpha == doctest::Approx(0.0));
    CHECK(c.beta == doctest::Approx(0.0));
    CHECK(std::abs(c.delta - cplx(1.0)) < 1e-15);
}

TEST_CASE("uncoupled spin only precesses") {
    auto p = sample(3, 0.5, 0.0);
    for (double t : {0.3, 2.0, 17.0}) {
        const auto c = map_coefficients(p, t);
        CHECK(c.alpha == 0.0);
        CHECK(c.beta == 0.0);
        CHECK(std::abs(c.delta) == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("closed form agrees with the per-level amplitude equations") {
    for (int n : {1, 2, 7}) {
        const auto p = sample(n, 0.3 * n, 0.4);
        for (double t : {0.5, 3.3, 12.0}) {
            const auto c = map_coefficients(p, t);
            const auto o = oracle::assemble_map_from_blocks(p, t);
            CHECK(std::abs(c.alpha - o.alpha) < 1e-9);
            CHECK(std::abs(c.beta - o.beta) < 1e-9);
            CHECK(std::abs(c.delta - o.delta) < 1e-9);
        }
    }
}

TEST_CASE("analytic derivatives match central differences") {
    const ReducedMap map(sample(5, 1.0, 0.8));
    const double h = 1e-5;
    for (double t : {0.7, 4.1, 9.9}) {
        const auto d = map.derivatives(t);
        const auto lo = map.at(t - h), hi = map.at(t + h);
        CHECK(d.d_alpha == doctest::Approx((hi.alpha - lo.alpha) / (2 * h)).epsilon(1e-7));
        CHECK(d.d_beta == doctest::Approx((hi.beta - lo.beta) / (2 * h)).epsilon(1e-7));
        CHECK(std::abs(d.d_delta - (hi.delta - lo.delta) / (2 * h)) < 1e-7);
        const auto [c, r] = map.evaluate(t);
        CHECK(c.alpha == map.at(t).alpha);
        CHECK(r.d_alpha == d.d_alpha);
    }
}

TEST_CASE("coefficients stay inside the CP region") {
    for (double t = 0.0; t < 40.0; t += 0.37) {
        const auto c = map_coefficients(sample(3, 0.2, 1.0), t);
        CHECK(c.alpha >= -1e-14);
        CHECK(c.alpha <= 1.0 + 1e-14);
        CHECK(c.beta >= -1e-14);
        CHECK(c.cp_margin() >= -1e-12);
    }
}

TEST_CASE("apply_map acts on populations and coherence") {
    MapCoefficients c;
    c.alpha = 0.2;
    c.beta = 0.1;
    c.delta = {0.3, -0.4};
    const auto out = apply_map(c, QubitState(0.6, cplx(0.1, 0.2)));
    CHECK(out.rho11() == doctest::Approx(0.6 * 0.8 + 0.4 * 0.1));
    CHECK(std::abs(out.rho12() - cplx(0.1, 0.2) * cplx(0.3, -0.4)) < 1e-15);

    c.delta = {0.95, 0.0};
    CHECK_THROWS_AS(apply_map(c, QubitState::maximally_coherent()), CpViolation);
}

TEST_CASE("qubit state helpers") {
    const auto s = QubitState::from_bloch(0.3, -0.4, 0.5);
    const auto b = s.bloch();
    CHECK(b.x() == doctest::Approx(0.3));
    CHECK(b.y() == doctest::Approx(-0.4));
    CHECK(b.z() == doctest::Approx(0.5));
    const auto [pa, pb] = s.eigenvalues();
    CHECK(pa + pb == doctest::Approx(1.0));
    CHECK(pa - pb == doctest::Approx(std::sqrt(0.5)));
    CHECK_FALSE(QubitState(0.5, 0.6).is_valid());
}
