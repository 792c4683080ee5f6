#include "cspin/core_map.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cspin/detail/summation.hpp"

namespace cspin {

namespace {

constexpr double kCpTolerance = 1e-12;

// sin(eta t / 2) / eta together with cos(eta t / 2); the ratio tends to t/2 as eta -> 0.
struct HalfAngle {
    double cos;
    double sin_over;
};

HalfAngle half_angle(double eta, double t) {
    const double x = 0.5 * eta * t;
    HalfAngle h{std::cos(x), 0.0};
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        h.sin_over = 0.5 * t * (1.0 - x2 / 6.0 + x2 * x2 / 120.0);
    } else {
        h.sin_over = std::sin(x) / eta;
    }
    return h;
}

} // namespace

double MapCoefficients::cp_margin() const noexcept {
    return (1.0 - alpha) * (1.0 - beta) - std::norm(delta);
}

bool MapCoefficients::is_cp(double tol) const noexcept {
    return alpha >= -tol && alpha <= 1.0 + tol && beta >= -tol && beta <= 1.0 + tol &&
           cp_margin() >= -tol;
}

QubitState QubitState::from_bloch(double x, double y, double z) {
    // rho = (I + x sx + y sy + z sz) / 2 in the (|1>, |0>) basis
    return {0.5 * (1.0 + z), cplx{0.5 * x, -0.5 * y}};
}

QubitState QubitState::from_matrix(const Eigen::Matrix2cd& m) {
    const double tr = (m(0, 0) + m(1, 1)).real();
    if (std::abs(tr - 1.0) > 1e-10) throw std::invalid_argument("state trace is not 1");
    return {m(0, 0).real(), 0.5 * (m(0, 1) + std::conj(m(1, 0)))};
}

Eigen::Matrix2cd QubitState::matrix() const {
    Eigen::Matrix2cd m;
    m << rho11_, rho12_, std::conj(rho12_), 1.0 - rho11_;
    return m;
}

Eigen::Vector3d QubitState::bloch() const {
    return {2.0 * rho12_.real(), -2.0 * rho12_.imag(), 2.0 * rho11_ - 1.0};
}

std::pair<double, double> QubitState::eigenvalues() const noexcept {
    const double z = 2.0 * rho11_ - 1.0;
    const double r = std::sqrt(z * z + 4.0 * std::norm(rho12_));
    return {0.5 * (1.0 + r), 0.5 * (1.0 - r)};
}

bool QubitState::is_valid(double tol) const noexcept {
    return std::isfinite(rho11_) && std::isfinite(rho12_.real()) &&
           std::isfinite(rho12_.imag()) && rho11_ >= -tol && rho11_ <= 1.0 + tol &&
           rho11_ * (1.0 - rho11_) - std::norm(rho12_) >= -tol;
}

ReducedMap::ReducedMap(const ModelParams& params) : params_(params) {
    params_.validate();
    const int N = params_.n_bath;
    const double d0 = params_.detuning();
    const double e2 = params_.epsilon * params_.epsilon;
    weight_ = thermal_weights(params_);
    eta_.resize(static_cast<std::size_t>(N) + 2);
    coupling_.resize(eta_.size());
    for (int m = -1; m <= N; ++m) {
        const double c = 4.0 * e2 * (m + 1.0) * (1.0 - m / (2.0 * N));
        coupling_[m + 1] = c;
        eta_[m + 1] = std::sqrt(d0 * d0 + c);
    }
    eta_max_ = *std::max_element(eta_.begin(), eta_.end());
}

MapCoefficients ReducedMap::at(double t) const {
    if (!(t >= 0.0)) throw std::domain_error("map time must be non-negative");
    const int N = params_.n_bath;
    const double d0 = params_.detuning();
    const bool conj_ground = params_.delta_form == DeltaForm::exact;

    detail::NeumaierSum alpha;
    detail::NeumaierSum beta;
    detail::ComplexNeumaierSum delta;

    HalfAngle prev = half_angle(eta_of(-1), t); // level n-1 at n = 0
    for (int n = 0; n <= N; ++n) {
        const HalfAngle cur = half_angle(eta_of(n), t);
        const double w = weight_[n];
        alpha += w * coupling_[n + 1] * cur.sin_over * cur.sin_over;
        if (n > 0) beta += w * coupling_[n] * prev.sin_over * prev.sin_over;

        const cplx excited{cur.cos, -d0 * cur.sin_over};
        const cplx ground{prev.cos, conj_ground ? -d0 * prev.sin_over : d0 * prev.sin_over};
        delta += w * excited * ground;
        prev = cur;
    }

    const double phase = params_.omega * t / (2.0 * N);
    MapCoefficients c;
    c.alpha = alpha.value();
    c.beta = beta.value();
    c.delta = std::polar(1.0, -phase) * delta.value();
    c.time = t;
    return c;
}

CoefficientRates ReducedMap::derivatives(double t) const {
    return evaluate(t).second;
}

std::pair<MapCoefficients, CoefficientRates> ReducedMap::evaluate(double t) const {
    if (!(t >= 0.0)) throw std::domain_error("map time must be non-negative");
    const int N = params_.n_bath;
    const double d0 = params_.detuning();
    const double sign = params_.delta_form == DeltaForm::exact ? -1.0 : 1.0;
    const double phase_rate = params_.omega / (2.0 * N);

    detail::NeumaierSum alpha;
    detail::NeumaierSum beta;
    detail::NeumaierSum d_alpha;
    detail::NeumaierSum d_beta;
    detail::ComplexNeumaierSum value;
    detail::ComplexNeumaierSum slope;

    // d/dt [sin(x)/eta] = cos(x)/2 and d/dt cos(x) = -(eta^2/2) sin(x)/eta, x = eta t/2
    HalfAngle prev = half_angle(eta_of(-1), t);
    double prev_eta = eta_of(-1);
    for (int n = 0; n <= N; ++n) {
        const double eta = eta_of(n);
        const HalfAngle cur = half_angle(eta, t);
        const double w = weight_[n];
        alpha += w * coupling_[n + 1] * cur.sin_over * cur.sin_over;
        d_alpha += w * coupling_[n + 1] * cur.sin_over * cur.cos;
        if (n > 0) {
            beta += w * coupling_[n] * prev.sin_over * prev.sin_over;
            d_beta += w * coupling_[n] * prev.sin_over * prev.cos;
        }

        const cplx f{cur.cos, -d0 * cur.sin_over};
        const cplx df{-0.5 * eta * eta * cur.sin_over, -0.5 * d0 * cur.cos};
        const cplx g{prev.cos, sign * d0 * prev.sin_over};
        const cplx dg{-0.5 * prev_eta * prev_eta * prev.sin_over, sign * 0.5 * d0 * prev.cos};
        value += w * f * g;
        slope += w * (df * g + f * dg);
        prev = cur;
        prev_eta = eta;
    }

    const cplx rot = std::polar(1.0, -phase_rate * t);
    MapCoefficients c;
    c.alpha = alpha.value();
    c.beta = beta.value();
    c.delta = rot * value.value();
    c.time = t;
    CoefficientRates r;
    r.d_alpha = d_alpha.value();
    r.d_beta = d_beta.value();
    r.d_delta = rot * (slope.value() - cplx{0.0, phase_rate} * value.value());
    return {c, r};
}

MapCoefficients map_coefficients(const ModelParams& params, double t) {
    return ReducedMap(params).at(t);
}

CoefficientRates coefficient_derivatives(const ModelParams& params, double t) {
    return ReducedMap(params).derivatives(t);
}

QubitState apply_map(const MapCoefficients& c, const QubitState& rho0) {
    if (!c.is_cp(kCpTolerance)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "map coefficients violate complete positivity at t=" << c.time
            << " (alpha=" << c.alpha << ", beta=" << c.beta << ", |delta|^2=" << std::norm(c.delta)
            << ", margin=" << c.cp_margin() << ")";
        // smallest eigenvalue of the Choi matrix: the {|00>,|11>} block is the only one
        // that can go negative once alpha, beta are in range
        const double a = 0.5 * (1.0 - c.alpha);
        const double d = 0.5 * (1.0 - c.beta);
        const double lam = 0.5 * (a + d) - std::sqrt(0.25 * (a - d) * (a - d) + 0.25 * std::norm(c.delta));
        throw CpViolation(msg.str(), std::min({lam, 0.5 * c.alpha, 0.5 * c.beta}));
    }
    const double p11 = rho0.rho11() * (1.0 - c.alpha) + rho0.rho22() * c.beta;
    return {p11, rho0.rho12() * c.delta};
}

} // namespace cspin
