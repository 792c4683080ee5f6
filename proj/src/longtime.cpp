#include "cspin/longtime.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "cspin/detail/parallel.hpp"
#include "cspin/detail/summation.hpp"

namespace cspin {

namespace {

struct Component {
    cplx amplitude;
    double nu;
};

// Delta(t) = sum_k amplitude_k e^{i nu_k t}
struct DeltaSpectrum {
    std::vector<Component> parts;
    double nu_max{0.0};
    bool resonant{false};
};

DeltaSpectrum delta_spectrum(const ModelParams& p) {
    p.validate();
    const int N = p.n_bath;
    const double d0 = p.detuning();
    const double shift = -p.omega / (2.0 * N);
    const auto w = thermal_weights(p);
    const bool exact = p.delta_form == DeltaForm::exact;

    DeltaSpectrum out;
    out.parts.reserve(4 * static_cast<std::size_t>(N + 1));
    for (int n = 0; n <= N; ++n) {
        const auto sp = spectral_pair(p, n);
        const double r = sp.eta > 0.0 ? d0 / sp.eta : 0.0;
        const double rp = sp.eta_prime > 0.0 ? d0 / sp.eta_prime : 0.0;
        // cos x - i r sin x = (1 - r)/2 e^{ix} + (1 + r)/2 e^{-ix}
        const double f[2] = {0.5 * (1.0 - r), 0.5 * (1.0 + r)};
        const double g[2] = {exact ? 0.5 * (1.0 - rp) : 0.5 * (1.0 + rp),
                             exact ? 0.5 * (1.0 + rp) : 0.5 * (1.0 - rp)};
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                const double amp = w[n] * f[a] * g[b];
                if (amp == 0.0) continue;
                const double nu = shift + 0.5 * ((a == 0 ? 1.0 : -1.0) * sp.eta +
                                                 (b == 0 ? 1.0 : -1.0) * sp.eta_prime);
                out.parts.push_back({amp, nu});
                out.nu_max = std::max(out.nu_max, std::abs(nu));
                if (std::abs(nu) <= kFrequencyMatchTolerance) out.resonant = true;
            }
        }
    }
    return out;
}

// Trapezoidal mean of e^{i nu t} over [0, M h], via the closed geometric sum.
cplx trapezoid_mean(double nu, double h, double steps) {
    const double theta = nu * h;
    const cplx end = std::polar(1.0, theta * steps);
    cplx sum;
    const double half = 0.5 * theta;
    if (std::sin(half) == 0.0) {
        sum = steps + 1.0;
    } else {
        sum = std::polar(std::sin((steps + 1.0) * half) / std::sin(half), steps * half);
    }
    return (sum - 0.5 * (1.0 + end)) / steps;
}

cplx cesaro_of(const DeltaSpectrum& spec, double horizon) {
    double steps = 1.0;
    if (spec.nu_max > 0.0) {
        const double h_max = 2.0 * std::numbers::pi / spec.nu_max / 20.0;
        steps = std::max(1.0, std::ceil(horizon / h_max));
    }
    const double h = horizon / steps;
    detail::ComplexNeumaierSum acc;
    for (const auto& c : spec.parts) acc += c.amplitude * trapezoid_mean(c.nu, h, steps);
    return acc.value();
}

ModelParams with_epsilon(ModelParams p, double eps) {
    p.epsilon = eps;
    return p;
}

bool plus_branch_allowed(const ModelParams& p) {
    return p.omega0 > 0.0 ? p.n_bath <= p.omega / p.omega0 : true;
}

} // namespace

AveragedCoefficients averaged_populations(const ModelParams& p) {
    p.validate();
    const int N = p.n_bath;
    const double e2 = p.epsilon * p.epsilon;
    const auto w = thermal_weights(p);
    detail::NeumaierSum a, b;
    for (int n = 0; n <= N; ++n) {
        const auto sp = spectral_pair(p, n);
        const double ca = 4.0 * e2 * (n + 1.0) * (1.0 - n / (2.0 * N));
        const double cb = 4.0 * e2 * n * (1.0 - (n - 1.0) / (2.0 * N));
        if (ca > 0.0) a += w[n] * ca / (2.0 * sp.eta * sp.eta);
        if (cb > 0.0) b += w[n] * cb / (2.0 * sp.eta_prime * sp.eta_prime);
    }
    AveragedCoefficients out;
    out.alpha_bar = a.value();
    out.beta_bar = b.value();
    return out;
}

cplx cesaro_delta(const ModelParams& params, double horizon) {
    if (!(horizon > 0.0)) throw std::invalid_argument("averaging horizon must be positive");
    return cesaro_of(delta_spectrum(params), horizon);
}

DeltaAverage delta_average(const ModelParams& params, double tolerance) {
    if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
    const auto spec = delta_spectrum(params);
    DeltaAverage out;
    if (!spec.resonant) {
        out.analytic_zero = true;
        out.converged = true;
        return out;
    }
    double horizon = kDeltaStartHorizon;
    cplx prev = cesaro_of(spec, horizon);
    for (int k = 0; k < kDeltaMaxDoublings; ++k) {
        horizon *= 2.0;
        const cplx cur = cesaro_of(spec, horizon);
        out.value = cur;
        out.horizon = horizon;
        if (std::abs(cur - prev) <= tolerance * std::abs(cur)) {
            out.converged = true;
            return out;
        }
        prev = cur;
    }
    return out;
}

AveragedCoefficients averaged_coefficients(const ModelParams& params, double tolerance) {
    auto avg = averaged_populations(params);
    const auto d = delta_average(params, tolerance);
    avg.delta_bar = d.value;
    avg.horizon = d.horizon;
    avg.converged = d.converged;
    avg.delta_evaluated = true;
    return avg;
}

QubitState time_averaged_state(const AveragedCoefficients& avg, const QubitState& rho0) {
    return {rho0.rho11() * (1.0 - avg.alpha_bar) + rho0.rho22() * avg.beta_bar, rho0.rho12() * avg.delta_bar};
}

QubitState time_averaged_state(const ModelParams& params, const QubitState& rho0) {
    return time_averaged_state(averaged_coefficients(params), rho0);
}

const char* to_string(Branch b) { return b == Branch::minus ? "minus" : "plus"; }

double branch_residual(const ModelParams& params, int n, Branch branch) {
    const auto sp = spectral_pair(params, n);
    const double combo = branch == Branch::minus ? sp.eta - sp.eta_prime : sp.eta + sp.eta_prime;
    return std::abs(params.omega / (2.0 * params.n_bath) - 0.5 * std::abs(combo));
}

std::vector<ResonanceReport> resonance_levels(const ModelParams& p) {
    p.validate();
    if (!(p.epsilon > 0.0)) throw std::invalid_argument("resonance analysis needs epsilon > 0");
    const double N = p.n_bath;
    const double e = p.epsilon, e2 = e * e, e4 = e2 * e2;
    const double w = p.omega, w0 = p.omega0;

    const double A = e4 / (N * N) + e2 * w * w / (2.0 * N * N * N);
    const double B = 2.0 * N * A;
    const double C = w0 * w * w * w / (4.0 * N * N * N) - w * w * w0 * w0 / (4.0 * N * N) -
                     e2 * w * w / (2.0 * N * N) + e4;
    ResonanceReport base;
    base.epsilon = e;
    base.q1 = e4;
    base.q2 = e2 * w * w + e2 * w0 * w0 + 2.0 * e4;
    base.q3 = w * w * w0 * w0 + 2.0 * e2 * w * w - 2.0 * e2 * w * w0;
    base.q4 = 2.0 * w0 * w * w * w;
    base.discriminant = B * B - 4.0 * A * C;
    if (base.discriminant >= 0.0) {
        const double off = std::sqrt(base.discriminant) / (2.0 * A);
        base.roots = {N - off, N + off};
        if (off == 0.0) base.roots.pop_back();
    }

    std::vector<ResonanceReport> out;
    for (const Branch br : {Branch::minus, Branch::plus}) {
        if (br == Branch::plus && !plus_branch_allowed(p)) continue;
        ResonanceReport r = base;
        r.branch = br;
        for (const double root : r.roots) {
            const double m = std::round(root);
            if (std::abs(root - m) > kIntegralityTolerance || m < 0.0 || m > N) continue;
            const int level = static_cast<int>(m);
            if (branch_residual(p, level, br) <= kFrequencyMatchTolerance &&
                std::find(r.integer_levels.begin(), r.integer_levels.end(), level) == r.integer_levels.end())
                r.integer_levels.push_back(level);
        }
        r.epsilon_candidates = epsilon_candidates(p, br);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<double> epsilon_candidates(const ModelParams& p, Branch branch) {
    p.validate();
    std::vector<double> out;
    if (!(p.omega > 0.0)) return out;
    if (branch == Branch::plus && !plus_branch_allowed(p)) return out;
    const int N = p.n_bath;
    const double s = p.omega / N;
    const double d0 = p.detuning();
    for (int m = 0; m <= N; ++m) {
        const double u = 1.0 - static_cast<double>(m) / N;
        const double cm = (m + 1.0) * (1.0 - m / (2.0 * N));
        // (4u^2/s^2) x^2 - 2(2c_m - u) x + s^2/4 - d0^2 = 0 with x = eps^2
        const double qa = 4.0 * u * u / (s * s);
        const double qb = -2.0 * (2.0 * cm - u);
        const double qc = 0.25 * s * s - d0 * d0;
        std::vector<double> xs;
        if (qa == 0.0) {
            if (qb != 0.0) xs.push_back(-qc / qb);
        } else {
            const double disc = qb * qb - 4.0 * qa * qc;
            if (disc < 0.0) continue;
            const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
            if (q != 0.0) xs.push_back(q / qa);
            if (q != 0.0) xs.push_back(qc / q);
            else xs.push_back(0.0);
        }
        for (const double x : xs) {
            if (!(x > 0.0)) continue;
            const double eps = std::sqrt(x);
            if (branch_residual(with_epsilon(p, eps), m, branch) <= kFrequencyMatchTolerance) out.push_back(eps);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(), [](double a, double b) { return std::abs(a - b) <= 1e-15 * b; }),
              out.end());
    return out;
}

std::vector<double> simplified_resonance_epsilons(int n_bath, double eps_lo, double eps_hi) {
    if (n_bath < 1 || !(eps_lo > 0.0) || !(eps_hi >= eps_lo))
        throw std::invalid_argument("need N >= 1 and 0 < eps_lo <= eps_hi");
    const double root = std::sqrt(static_cast<double>(n_bath)) / std::numbers::sqrt2;
    std::vector<double> out;
    const long k_lo = std::max(1L, static_cast<long>(std::ceil(root / eps_hi)));
    const long k_hi = std::min(static_cast<long>(n_bath), static_cast<long>(std::floor(root / eps_lo)));
    for (long k = k_hi; k >= k_lo; --k) out.push_back(root / static_cast<double>(k));
    return out;
}

std::vector<ResonanceHit> resonance_scan(const ModelParams& base, double eps_lo, double eps_hi, int count,
                                         double threshold, int workers) {
    if (!(eps_lo > 0.0) || !(eps_hi > eps_lo) || count < 2)
        throw std::invalid_argument("resonance scan needs 0 < eps_lo < eps_hi and count >= 2");
    const double cell = (eps_hi - eps_lo) / (count - 1);

    struct Candidate {
        double eps;
        Branch branch;
    };
    std::vector<Candidate> cands;
    for (const Branch br : {Branch::minus, Branch::plus})
        for (const double e : epsilon_candidates(base, br))
            if (e >= eps_lo && e <= eps_hi) cands.push_back({e, br});
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        return a.eps < b.eps || (a.eps == b.eps && a.branch < b.branch);
    });

    auto found = detail::parallel_map<std::optional<ResonanceHit>>(cands.size(), workers, [&](std::size_t i) {
        const auto p = with_epsilon(base, cands[i].eps);
        std::optional<ResonanceHit> hit;
        for (auto& rep : resonance_levels(p)) {
            if (rep.branch != cands[i].branch || !rep.resonant()) continue;
            ResonanceHit h;
            h.report = std::move(rep);
            h.grid_index = std::min(count - 2, static_cast<int>((cands[i].eps - eps_lo) / cell));
            h.delta_bar = delta_average(p);
            if (std::abs(h.delta_bar.value) > threshold) hit = std::move(h);
        }
        return hit;
    });
    std::vector<ResonanceHit> out;
    for (auto& f : found)
        if (f) out.push_back(std::move(*f));
    return out;
}

double information_trapping(const ModelParams& params) {
    const auto avg = averaged_populations(params);
    return std::abs(avg.beta_bar - avg.alpha_bar);
}

std::vector<QubitState> bloch_grid(int points_per_shell, int shells) {
    if (points_per_shell < 1 || shells < 1) throw std::invalid_argument("grid needs at least one point and shell");
    std::vector<QubitState> out;
    out.push_back(QubitState::maximally_mixed());
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 1; k <= shells; ++k) {
        const double radius = static_cast<double>(k) / shells;
        for (int i = 0; i < points_per_shell; ++i) {
            const double z = points_per_shell == 1 ? 1.0 : 1.0 - 2.0 * i / (points_per_shell - 1.0);
            const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = golden * i;
            out.push_back(QubitState::from_bloch(radius * rho * std::cos(phi), radius * rho * std::sin(phi),
                                                 radius * z));
        }
    }
    return out;
}

TrappingNumeric trapping_numeric(const AveragedCoefficients& avg, std::span<const QubitState> grid) {
    TrappingNumeric out;
    out.closed_form = std::abs(avg.beta_bar - avg.alpha_bar);
    for (const auto& rho : grid) {
        const auto once = time_averaged_state(avg, rho);
        const auto twice = time_averaged_state(avg, once);
        const Eigen::Matrix2cd diff = twice.matrix() - once.matrix();
        const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(diff, Eigen::EigenvaluesOnly);
        const double half = 0.5 * es.eigenvalues().cwiseAbs().sum();
        const bool pure = std::abs(rho.bloch().norm() - 1.0) < 1e-12;
        (pure ? out.boundary_max : out.interior_max) =
            std::max(pure ? out.boundary_max : out.interior_max, half);
        if (half > out.half_norm) {
            out.half_norm = half;
            out.argmax = rho.bloch();
        }
    }
    out.full_norm = 2.0 * out.half_norm;
    return out;
}

TrappingNumeric trapping_numeric(const ModelParams& params, std::span<const QubitState> grid) {
    return trapping_numeric(averaged_coefficients(params), grid);
}

} // namespace cspin
