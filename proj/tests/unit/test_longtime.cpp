#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "cspin/core_map.hpp"
#include "cspin/longtime.hpp"

using namespace cspin;

namespace {

ModelParams small_bath() {
    ModelParams p;
    p.omega0 = 1.2;
    p.omega = 0.9;
    p.epsilon = 0.4;
    p.n_bath = 3;
    p.temperature = Temperature(1.0);
    return p;
}

double eta(const ModelParams& p, int m) {
    const double n = p.n_bath;
    const double d0 = p.omega0 - p.omega / (2 * n);
    return std::sqrt(d0 * d0 + 4 * p.epsilon * p.epsilon * (m + 1) * (1 - m / (2 * n)));
}

} // namespace

TEST_CASE("averaged populations match a brute-force time average") {
    const auto p = small_bath();
    const ReducedMap map(p);
    const double horizon = 4000.0, h = 0.01;
    double sa = 0.0, sb = 0.0;
    const int steps = static_cast<int>(horizon / h);
    for (int i = 0; i <= steps; ++i) {
        const auto c = map.at(i * h);
        const double w = (i == 0 || i == steps) ? 0.5 : 1.0;
        sa += w * c.alpha;
        sb += w * c.beta;
    }
    const auto avg = averaged_populations(p);
    CHECK(avg.alpha_bar == doctest::Approx(sa * h / horizon).epsilon(2e-3));
    CHECK(avg.beta_bar == doctest::Approx(sb * h / horizon).epsilon(2e-3));
    CHECK_FALSE(avg.delta_evaluated);
}

TEST_CASE("Cesaro mean of Delta matches a direct trapezoid") {
    const auto p = small_bath();
    const ReducedMap map(p);
    const double horizon = 300.0, h = 0.002;
    const int steps = static_cast<int>(horizon / h);
    cplx sum = 0.0;
    for (int i = 0; i <= steps; ++i) sum += ((i == 0 || i == steps) ? 0.5 : 1.0) * map.at(i * h).delta;
    CHECK(std::abs(cesaro_delta(p, horizon) - sum * h / horizon) < 1e-4);
}

TEST_CASE("off-resonance coherence averages out") {
    const auto p = small_bath();
    CHECK(std::abs(cesaro_delta(p, 1e4)) < 1e-3);
    const auto d = delta_average(p);
    CHECK(d.analytic_zero);
    CHECK(d.value == cplx(0.0));
}

TEST_CASE("averaged state keeps memory of the initial state") {
    ModelParams p;
    p.epsilon = 0.5;
    p.n_bath = 10;
    p.temperature = Temperature(1.0);
    const auto avg = averaged_coefficients(p);
    const double a = time_averaged_state(avg, QubitState::ground()).rho11();
    const double b = time_averaged_state(avg, QubitState::maximally_mixed()).rho11();
    const double c = time_averaged_state(avg, QubitState::excited()).rho11();
    CHECK(a < b);
    CHECK(b < c);
    CHECK(c - a == doctest::Approx(1 - avg.alpha_bar - avg.beta_bar));
}

TEST_CASE("resonant couplings satisfy the frequency condition") {
    ModelParams p;
    p.n_bath = 100;
    p.epsilon = 0.5;
    const auto cands = epsilon_candidates(p, Branch::minus);
    REQUIRE(cands.size() > 10);
    for (double e : {cands.front(), cands[cands.size() / 2], cands.back()}) {
        ModelParams q = p;
        q.epsilon = e;
        const auto reports = resonance_levels(q);
        REQUIRE(reports.size() == 1);
        REQUIRE(reports[0].resonant());
        const int n = reports[0].integer_levels.front();
        CHECK(std::abs(q.omega / q.n_bath - std::abs(eta(q, n) - eta(q, n - 1))) < 1e-9);
        CHECK(branch_residual(q, n, Branch::minus) < 1e-9);
    }
}

TEST_CASE("resonant Delta does not average to zero") {
    ModelParams p;
    p.n_bath = 100;
    p.epsilon = epsilon_candidates(p, Branch::minus)[40];
    const auto d = delta_average(p);
    CHECK_FALSE(d.analytic_zero);
    CHECK(std::abs(d.value) > 1e-8);
    ModelParams off = p;
    off.epsilon *= 1.01;
    CHECK(delta_average(off).analytic_zero);
}

TEST_CASE("plus branch only for N <= omega/omega0") {
    ModelParams p;
    p.epsilon = 0.3;
    p.n_bath = 2;
    CHECK(resonance_levels(p).size() == 1);
    p.n_bath = 1;
    const auto r = resonance_levels(p);
    REQUIRE(r.size() == 2);
    CHECK(r[1].branch == Branch::plus);
    p.epsilon = 0.0;
    CHECK_THROWS_AS(resonance_levels(p), std::invalid_argument);
}

TEST_CASE("strong coupling gives no integer level") {
    ModelParams p;
    p.n_bath = 100;
    p.epsilon = 1e3;
    const auto r = resonance_levels(p);
    CHECK_FALSE(r[0].resonant());
    REQUIRE(r[0].roots.size() == 2);
    // the quadratic's roots are symmetric about N
    CHECK(r[0].roots[0] + r[0].roots[1] == doctest::Approx(200.0));
}

TEST_CASE("simplified route approximates the exact candidates") {
    ModelParams p;
    p.n_bath = 100;
    const auto exact = epsilon_candidates(p, Branch::minus);
    const auto simple = simplified_resonance_epsilons(100, 0.1, 2.0);
    REQUIRE_FALSE(simple.empty());
    for (double e : simple) {
        double nearest = INFINITY;
        for (double x : exact) nearest = std::min(nearest, std::abs(x - e));
        CHECK(nearest < 0.01 * e);
        ModelParams q = p;
        q.epsilon = e;
        const double root = resonance_levels(q)[0].roots.front();
        CHECK(std::abs(root - std::round(root)) < 0.2);
    }
    p.n_bath = 4;
    const auto exact4 = epsilon_candidates(p, Branch::minus);
    const auto simple4 = simplified_resonance_epsilons(4, 0.01, 10.0);
    CHECK(exact4 != simple4);
}

TEST_CASE("resonance scan") {
    ModelParams p;
    p.n_bath = 100;
    const auto hits = resonance_scan(p, 0.1, 2.0, 1000, 1e-8, 2);
    REQUIRE_FALSE(hits.empty());
    for (const auto& h : hits) {
        CHECK(h.report.resonant());
        CHECK(std::abs(h.delta_bar.value) > 1e-8);
        CHECK(h.report.epsilon >= 0.1);
        CHECK(h.report.epsilon <= 2.0);
    }
    CHECK(std::is_sorted(hits.begin(), hits.end(),
                         [](const auto& a, const auto& b) { return a.report.epsilon < b.report.epsilon; }));
    const auto serial = resonance_scan(p, 0.1, 2.0, 1000, 1e-8, 1);
    REQUIRE(serial.size() == hits.size());
    for (std::size_t i = 0; i < hits.size(); ++i) CHECK(serial[i].delta_bar.value == hits[i].delta_bar.value);
    // a range between two neighbouring candidates
    const auto cands = epsilon_candidates(p, Branch::minus);
    const double lo = cands[50] + 1e-6, hi = cands[51] - 1e-6;
    CHECK(resonance_scan(p, lo, hi, 10).empty());
}

TEST_CASE("information trapping") {
    ModelParams p;
    p.n_bath = 10;
    p.epsilon = 0.5;
    CHECK(information_trapping(p) > 0.0);
    p.epsilon = 0.0;
    CHECK(information_trapping(p) == 0.0);
}

TEST_CASE("idempotence defect of the averaged map") {
    ModelParams p;
    p.epsilon = 0.5;
    p.n_bath = 10;
    p.temperature = Temperature(0.5);
    const auto avg = averaged_coefficients(p);
    const auto grid = bloch_grid(300, 4);
    CHECK(grid.size() == 1201);
    const auto t = trapping_numeric(avg, grid);
    // with Delta_bar = 0 the defect is |1 - a - b| max(a, b), largest on the poles of the ball
    const double k = 1 - avg.alpha_bar - avg.beta_bar;
    CHECK(t.half_norm == doctest::Approx(std::abs(k) * std::max(avg.alpha_bar, avg.beta_bar)).epsilon(1e-9));
    CHECK(t.full_norm == doctest::Approx(2 * t.half_norm));
    CHECK(t.boundary_max >= t.interior_max);
    CHECK(t.closed_form == doctest::Approx(information_trapping(p)));
    CHECK(t.half_norm != doctest::Approx(t.closed_form));
}
