// ode.hpp: adaptive Dormand-Prince 5(4) integrator for small fixed-size systems

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cspin::ode {

struct Options {
    double rtol{1e-10};
    double atol{1e-12};
    double initial_step{0.0}; // 0 selects a heuristic
    double max_step{0.0};     // 0 means unbounded
    double min_step{1e-14};   // relative to max(1, |t|)
    long max_steps{10'000'000};
};

struct Stats {
    long accepted{0};
    long rejected{0};
    double last_step{0.0};
};

class StepUnderflow : public std::runtime_error {
public:
    StepUnderflow(double t, double h)
        : std::runtime_error("step size underflow at t=" + std::to_string(t) +
                             " (h=" + std::to_string(h) + ")"),
          t_(t) {}
    double time() const noexcept { return t_; }

private:
    double t_;
};

namespace detail {

template <class Vec>
double error_norm(const Vec& err, const Vec& y0, const Vec& y1, const Options& opt) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
        const double scale = opt.atol + opt.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        worst = std::max(worst, std::abs(err[i]) / scale);
    }
    return worst;
}

} // namespace detail

// Integrates dy/dt = rhs(t, y) from t0 to t1 (t1 > t0), calling observer(t, y) after
// every accepted step. On return y holds y(t1); stats.last_step can seed the next call.
template <class Vec, class Rhs, class Observer>
Stats integrate(Rhs&& rhs, double t0, double t1, Vec& y, const Options& opt, Observer&& observer) {
    // Dormand-Prince tableau
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                     b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    Stats stats;
    if (!(t1 > t0)) return stats;
    const double span = t1 - t0;
    double h = opt.initial_step > 0.0 ? opt.initial_step : span * 1e-3;
    if (opt.max_step > 0.0) h = std::min(h, opt.max_step);

    double t = t0;
    Vec k1 = rhs(t, y);
    while (t < t1) {
        if (stats.accepted + stats.rejected >= opt.max_steps) {
            throw std::runtime_error("ode: step budget exhausted");
        }
        bool last = false;
        if (t + h >= t1 || t + 1.01 * h >= t1) {
            h = t1 - t;
            last = true;
        }
        const Vec k2 = rhs(t + c2 * h, Vec(y + h * a21 * k1));
        const Vec k3 = rhs(t + c3 * h, Vec(y + h * (a31 * k1 + a32 * k2)));
        const Vec k4 = rhs(t + c4 * h, Vec(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
        const Vec k5 = rhs(t + c5 * h, Vec(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
        const Vec k6 =
            rhs(t + h, Vec(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
        const Vec y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const double t_new = last ? t1 : t + h;
        const Vec k7 = rhs(t_new, y_new);
        const Vec err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        const double en = detail::error_norm(err, y, y_new, opt);
        if (!std::isfinite(en)) {
            h *= 0.1;
            ++stats.rejected;
        } else if (en <= 1.0) {
            t = t_new;
            y = y_new;
            k1 = k7; // FSAL
            ++stats.accepted;
            stats.last_step = h;
            observer(t, y);
            const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
            if (!last) h *= fac;
        } else {
            h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
            ++stats.rejected;
        }
        if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
        if (t < t1 && h < opt.min_step * std::max(1.0, std::abs(t))) throw StepUnderflow(t, h);
    }
    return stats;
}

template <class Vec, class Rhs>
Stats integrate(Rhs&& rhs, double t0, double t1, Vec& y, const Options& opt) {
    return integrate(std::forward<Rhs>(rhs), t0, t1, y, opt, [](double, const Vec&) {});
}

} // namespace cspin::ode
