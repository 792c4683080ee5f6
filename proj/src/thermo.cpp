#include "cspin/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include <Eigen/Eigenvalues>

namespace cspin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

LindbladRates rates_from(const MapCoefficients& c, const CoefficientRates& r) {
    LindbladRates out;
    out.time = c.time;
    const double k = 1.0 - c.alpha - c.beta;
    const double num = r.d_alpha + r.d_beta;
    const double mag2 = std::norm(c.delta);
    const bool population_pole = std::abs(k) < kPoleThreshold;
    const bool coherence_pole = std::sqrt(mag2) < kPoleThreshold;
    out.pole_flag = population_pole || coherence_pole;

    double ell; // (d alpha + d beta) / (1 - alpha - beta)
    if (population_pole) {
        // approaching the zero of k from the left, k and num share a sign
        const double s = (k != 0.0 && num != 0.0) ? ((num > 0.0) == (k > 0.0) ? 1.0 : -1.0) : 1.0;
        ell = s * kInf;
        out.gamma_dis = c.alpha > 0.0 ? ell : r.d_alpha;
        out.gamma_abs = c.beta > 0.0 ? ell : r.d_beta;
    } else {
        ell = num / k;
        out.gamma_dis = r.d_alpha + c.alpha * ell;
        out.gamma_abs = r.d_beta + c.beta * ell;
    }

    if (coherence_pole) {
        // |Delta| decreasing into its zero: d ln|Delta|^2 -> -inf
        out.gamma_deph = population_pole && ell > 0.0 ? kNaN : kInf;
        out.delta_shift = kNaN;
    } else {
        const cplx ratio = std::conj(c.delta) * r.d_delta / mag2;
        out.gamma_deph = -0.25 * (ell + 2.0 * ratio.real());
        out.delta_shift = -0.5 * ratio.imag();
    }
    return out;
}

double default_step(const ReducedMap& map, double span) {
    const double eta = map.eta_max();
    if (eta > 0.0) return 2.0 * std::numbers::pi / eta / 20.0;
    return span / 1000.0;
}

struct Snapshot {
    QubitState rho;
    double d_rho11{0.0};
    cplx d_rho12{0.0, 0.0};
};

// rho(t) and its time derivative from the closed-form map; no CP screening so that
// scans never throw on round-off.
Snapshot evolve_with_rate(const MapCoefficients& c, const CoefficientRates& r, const QubitState& rho0) {
    Snapshot s;
    s.rho = QubitState(rho0.rho11() * (1.0 - c.alpha) + rho0.rho22() * c.beta, rho0.rho12() * c.delta);
    s.d_rho11 = -rho0.rho11() * r.d_alpha + rho0.rho22() * r.d_beta;
    s.d_rho12 = rho0.rho12() * r.d_delta;
    return s;
}

double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

BalanceSample balance_from(const LindbladRates& g, const QubitState& rho) {
    BalanceSample b;
    b.time = g.time;
    b.pole_flag = g.pole_flag;
    std::tie(b.p_a, b.p_b) = rho.eigenvalues();

    const double den = g.gamma_abs * b.p_b;
    b.defined = !g.pole_flag && den != 0.0 && std::isfinite(den);
    b.ratio = b.defined ? g.gamma_dis * b.p_a / den : kNaN;

    // eigenbasis of rho(t); |a> is the eigenvector with the larger |1> component
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(rho.matrix());
    const auto& v = es.eigenvectors();
    const int ia = std::abs(v(0, 1)) >= std::abs(v(0, 0)) ? 1 : 0;
    const Eigen::Vector2cd a = v.col(ia);
    const Eigen::Vector2cd bv = v.col(1 - ia);
    const double pa = es.eigenvalues()[ia];
    const double pb = es.eigenvalues()[1 - ia];

    Eigen::Matrix2cd lower = Eigen::Matrix2cd::Zero();
    lower(1, 0) = 1.0;
    Eigen::Matrix2cd sz = Eigen::Matrix2cd::Zero();
    sz(0, 0) = 1.0;
    sz(1, 1) = -1.0;
    const auto rate = [&](const Eigen::Vector2cd& to, const Eigen::Vector2cd& from) {
        return g.gamma_dis * std::norm(to.dot(lower * from)) +
               g.gamma_abs * std::norm(to.dot(lower.adjoint() * from)) +
               g.gamma_deph * std::norm(to.dot(sz * from));
    };
    const double out_of_a = rate(bv, a) * pa;
    const double into_a = rate(a, bv) * pb;
    const bool rot_ok = !g.pole_flag && into_a != 0.0 && std::isfinite(into_a);
    b.rotated_ratio = rot_ok ? out_of_a / into_a : kNaN;
    return b;
}

} // namespace

LindbladRates lindblad_rates(const ReducedMap& map, double t) {
    const auto [c, r] = map.evaluate(t);
    return rates_from(c, r);
}

LindbladRates lindblad_rates(const ModelParams& params, double t) {
    return lindblad_rates(ReducedMap(params), t);
}

std::vector<Pole> find_poles(const ReducedMap& map, double t0, double t1, double step) {
    std::vector<Pole> poles;
    if (!(t1 > t0)) return poles;
    if (step <= 0.0) step = default_step(map, t1 - t0);
    const auto cells = static_cast<long>(std::ceil((t1 - t0) / step));
    const double h = (t1 - t0) / static_cast<double>(cells);

    auto k_of = [&](double t) {
        const auto c = map.at(t);
        return 1.0 - c.alpha - c.beta;
    };
    auto mag_of = [&](double t) { return std::abs(map.at(t).delta); };

    std::vector<double> ts(cells + 1), ks(cells + 1), ms(cells + 1);
    for (long i = 0; i <= cells; ++i) {
        ts[i] = i == cells ? t1 : t0 + h * static_cast<double>(i);
        const auto c = map.at(ts[i]);
        ks[i] = 1.0 - c.alpha - c.beta;
        ms[i] = std::abs(c.delta);
    }

    for (long i = 0; i < cells; ++i) {
        if (std::abs(ks[i]) < kPoleThreshold) {
            poles.push_back({ts[i], PoleKind::population});
        } else if ((ks[i] > 0.0) != (ks[i + 1] > 0.0)) {
            double lo = ts[i], hi = ts[i + 1];
            const bool lo_pos = ks[i] > 0.0;
            for (int it = 0; it < 80 && hi - lo > 1e-14 * (1.0 + hi); ++it) {
                const double mid = 0.5 * (lo + hi);
                if ((k_of(mid) > 0.0) == lo_pos) lo = mid;
                else hi = mid;
            }
            poles.push_back({0.5 * (lo + hi), PoleKind::population});
        }
    }
    if (std::abs(ks[cells]) < kPoleThreshold) poles.push_back({t1, PoleKind::population});

    // |Delta| zeros: golden-section on every interior local minimum
    constexpr double g = 0.6180339887498949;
    for (long i = 0; i <= cells; ++i) {
        const bool left = i == 0 || ms[i] <= ms[i - 1];
        const bool right = i == cells || ms[i] <= ms[i + 1];
        if (!(left && right)) continue;
        // a zero within a cell of t_i keeps |Delta(t_i)| under h |dDelta/dt|
        if (ms[i] > 2.0 * h * std::abs(map.evaluate(ts[i]).second.d_delta) + kPoleThreshold) continue;
        double a = ts[std::max(0L, i - 1)], b = ts[std::min(cells, i + 1)];
        double x1 = b - g * (b - a), x2 = a + g * (b - a);
        double f1 = mag_of(x1), f2 = mag_of(x2);
        for (int it = 0; it < 100 && b - a > 1e-14 * (1.0 + b); ++it) {
            if (f1 < f2) {
                b = x2; x2 = x1; f2 = f1;
                x1 = b - g * (b - a); f1 = mag_of(x1);
            } else {
                a = x1; x1 = x2; f1 = f2;
                x2 = a + g * (b - a); f2 = mag_of(x2);
            }
        }
        const double tmin = f1 < f2 ? x1 : x2;
        const double fmin = std::min({f1, f2, ms[i]});
        if (fmin < kPoleThreshold) poles.push_back({fmin == ms[i] ? ts[i] : tmin, PoleKind::coherence});
    }

    std::sort(poles.begin(), poles.end(), [](const Pole& x, const Pole& y) { return x.time < y.time; });
    return poles;
}

MasterTrajectory integrate_master(const ModelParams& params, const QubitState& rho0,
                                  std::span<const double> output_times, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("master-equation tolerance must be positive");
    for (std::size_t i = 0; i < output_times.size(); ++i) {
        if (!(output_times[i] >= 0.0) || (i > 0 && !(output_times[i] > output_times[i - 1])))
            throw std::invalid_argument("output times must be non-negative and increasing");
    }
    MasterTrajectory traj;
    if (output_times.empty()) return traj;

    const ReducedMap map(params);
    const double t_last = output_times.back();
    double stop = t_last;
    const auto poles = find_poles(map, 0.0, t_last);
    if (!poles.empty()) {
        traj.halted_at = poles.front();
        stop = poles.front().time - kPoleExclusion;
    }

    ode::Options opt;
    opt.rtol = tol;
    opt.atol = tol;
    if (map.eta_max() > 0.0) opt.max_step = 2.0 * std::numbers::pi / map.eta_max() / 4.0;

    auto rhs = [&](double t, const Eigen::Vector3d& y) {
        const auto g = lindblad_rates(map, t);
        const cplx r12{y[1], y[2]};
        const cplx d12 = cplx{-0.5 * (g.gamma_dis + g.gamma_abs) - 2.0 * g.gamma_deph,
                              -2.0 * g.delta_shift} * r12;
        return Eigen::Vector3d(-g.gamma_dis * y[0] + g.gamma_abs * (1.0 - y[0]), d12.real(), d12.imag());
    };

    Eigen::Vector3d y(rho0.rho11(), rho0.rho12().real(), rho0.rho12().imag());
    double t = 0.0;
    for (const double target : output_times) {
        if (target > stop) break;
        if (target > t) {
            if (traj.stats.last_step > 0.0) opt.initial_step = traj.stats.last_step;
            const auto st = ode::integrate(rhs, t, target, y, opt);
            traj.stats.accepted += st.accepted;
            traj.stats.rejected += st.rejected;
            traj.stats.last_step = st.last_step;
            t = target;
        }
        traj.times.push_back(target);
        traj.states.emplace_back(y[0], cplx{y[1], y[2]});
    }
    if (traj.halted_at && traj.halted_at->time > t_last) traj.halted_at.reset();
    return traj;
}

MasterTrajectory integrate_master(const ModelParams& params, const QubitState& rho0,
                                  double t_end, double tol, int outputs) {
    if (!(t_end > 0.0) || outputs < 2) throw std::invalid_argument("need t_end > 0 and >= 2 outputs");
    std::vector<double> ts(static_cast<std::size_t>(outputs));
    for (int i = 0; i < outputs; ++i) ts[i] = t_end * i / (outputs - 1.0);
    return integrate_master(params, rho0, ts, tol);
}

BalanceSample detailed_balance(const ReducedMap& map, const QubitState& rho0, double t) {
    const auto [c, r] = map.evaluate(t);
    return balance_from(rates_from(c, r), evolve_with_rate(c, r, rho0).rho);
}

BalanceSample detailed_balance(const ModelParams& params, const QubitState& rho0, double t) {
    return detailed_balance(ReducedMap(params), rho0, t);
}

ThermoSample entropy_production(const ReducedMap& map, const QubitState& rho0, double t) {
    const auto [c, r] = map.evaluate(t);
    const auto g = rates_from(c, r);
    const auto snap = evolve_with_rate(c, r, rho0);
    const auto bal = balance_from(g, snap.rho);

    ThermoSample s;
    s.time = t;
    s.pole_flag = g.pole_flag;
    s.p_a = bal.p_a;
    s.p_b = bal.p_b;
    s.d_balance = bal.ratio;
    s.d_rotated = bal.rotated_ratio;
    s.d_defined = bal.defined;
    s.entropy = -(xlogx(s.p_a) + xlogx(s.p_b));

    // P_a = (1 + r)/2 with r the Bloch radius
    const double z = 2.0 * snap.rho.rho11() - 1.0;
    const double radius = std::sqrt(z * z + 4.0 * std::norm(snap.rho.rho12()));
    double d_pa = 0.0;
    if (radius > 0.0) {
        const double d_radius =
            (2.0 * z * snap.d_rho11 + 4.0 * std::real(std::conj(snap.rho.rho12()) * snap.d_rho12)) / radius;
        d_pa = 0.5 * d_radius;
    }
    if (d_pa != 0.0) s.entropy_rate = -d_pa * std::log(s.p_a / s.p_b);

    s.flux_dis = g.gamma_dis * s.p_a;
    s.flux_abs = g.gamma_abs * s.p_b;
    const double x = s.flux_dis;
    const double y = s.flux_abs;
    if (!std::isfinite(x) || !std::isfinite(y)) {
        s.sigma = kNaN;
    } else if (x == y) {
        s.sigma = 0.0;
    } else {
        s.sigma_pathology = !((x > 0.0 && y > 0.0) || (x < 0.0 && y < 0.0));
        s.sigma = (x - y) * std::log(std::abs(x / y));
    }
    s.phi = s.entropy_rate - s.sigma;
    return s;
}

ThermoSample entropy_production(const ModelParams& params, const QubitState& rho0, double t) {
    return entropy_production(ReducedMap(params), rho0, t);
}

std::vector<Interval> non_markovianity_witness(const ModelParams& params, std::span<const double> t_grid) {
    const ReducedMap map(params);
    return negative_intervals(
        [&](double t) {
            const auto g = lindblad_rates(map, t);
            if (g.pole_flag) return kNaN;
            return std::min({g.gamma_dis, g.gamma_abs, g.gamma_deph});
        },
        t_grid);
}

double total_length(const std::vector<Interval>& intervals) {
    double s = 0.0;
    for (const auto& iv : intervals) s += iv.length();
    return s;
}

double symmetric_difference(const std::vector<Interval>& a, const std::vector<Interval>& b) {
    double overlap = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double lo = std::max(a[i].start, b[j].start);
        const double hi = std::min(a[i].end, b[j].end);
        if (hi > lo) overlap += hi - lo;
        if (a[i].end < b[j].end) ++i;
        else ++j;
    }
    return total_length(a) + total_length(b) - 2.0 * overlap;
}

} // namespace cspin
