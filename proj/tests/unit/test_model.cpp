#include "doctest.h"

#include <cmath>
#include <numeric>

#include "cspin/model.hpp"

using namespace cspin;

TEST_CASE("thermal weights are normalized Boltzmann factors") {
    ModelParams p;
    p.n_bath = 6;
    p.omega = 1.7;
    p.temperature = Temperature(0.4);
    const auto w = thermal_weights(p);
    REQUIRE(w.size() == 7);
    CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    // ratio of neighbours is exp(-b/2N)
    for (std::size_t n = 1; n < w.size(); ++n)
        CHECK(w[n] / w[n - 1] == doctest::Approx(std::exp(-1.7 / 0.4 / 12.0)).epsilon(1e-13));
    CHECK(thermal_weight(p, 3) == doctest::Approx(w[3]));
}

TEST_CASE("infinite temperature gives uniform weights") {
    ModelParams p;
    p.n_bath = 9;
    for (double w : thermal_weights(p)) CHECK(w == doctest::Approx(0.1));
    CHECK(p.thermal_exponent() == 0.0);
    CHECK(partition_function(p) == doctest::Approx(10.0));
}

TEST_CASE("weights stay finite when the partition function overflows") {
    ModelParams p;
    p.n_bath = 4;
    p.omega = 100.0;
    p.temperature = Temperature(1e-3);
    const auto w = thermal_weights(p);
    CHECK(w[0] == doctest::Approx(1.0));
    for (std::size_t n = 1; n < w.size(); ++n) CHECK(std::isfinite(w[n]));
}

TEST_CASE("spectral pair") {
    ModelParams p;
    p.omega0 = 1.3;
    p.omega = 0.8;
    p.epsilon = 0.45;
    p.n_bath = 5;
    const double d0 = 1.3 - 0.8 / 10.0;
    for (int n = 0; n <= 5; ++n) {
        const auto s = spectral_pair(p, n);
        const double eta = std::sqrt(d0 * d0 + 4 * 0.45 * 0.45 * (n + 1) * (1 - n / 10.0));
        const double etap = std::sqrt(d0 * d0 + 4 * 0.45 * 0.45 * n * (1 - (n - 1) / 10.0));
        CHECK(s.eta == doctest::Approx(eta).epsilon(1e-14));
        CHECK(s.eta_prime == doctest::Approx(etap).epsilon(1e-14));
    }
    CHECK_THROWS_AS(spectral_pair(p, 6), std::domain_error);
    CHECK_THROWS_AS(spectral_pair(p, -1), std::domain_error);
}

TEST_CASE("parameter validation") {
    ModelParams p;
    p.n_bath = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.n_bath = 1;
    p.epsilon = -0.1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    CHECK_THROWS(Temperature(-1.0));
    CHECK_THROWS(Temperature(0.0));
    CHECK(delta_form_from_string(to_string(DeltaForm::unconjugated)) == DeltaForm::unconjugated);
    CHECK_THROWS(delta_form_from_string("bogus"));
}
