#include "cspin/model.hpp"

#include <cmath>

#include "cspin/detail/summation.hpp"

namespace cspin {

Temperature::Temperature(double value) : value_(value), infinite_(std::isinf(value)) {
    if (std::isnan(value) || value <= 0.0) {
        throw std::invalid_argument("temperature must be positive or infinite");
    }
}

void ModelParams::validate() const {
    if (n_bath < 1) throw std::invalid_argument("n_bath must be >= 1");
    if (!std::isfinite(omega0)) throw std::invalid_argument("omega0 must be finite");
    if (!std::isfinite(omega) || omega < 0.0) {
        throw std::invalid_argument("omega must be finite and non-negative");
    }
    if (!std::isfinite(epsilon) || epsilon < 0.0) {
        throw std::invalid_argument("epsilon must be finite and non-negative");
    }
    if (!std::isfinite(thermal_exponent())) {
        throw std::invalid_argument("omega / temperature is not finite");
    }
}

double ModelParams::thermal_exponent() const noexcept {
    if (temperature.is_infinite()) return 0.0;
    return omega / temperature.value();
}

double ModelParams::detuning() const noexcept {
    return omega0 - omega / (2.0 * n_bath);
}

namespace {

void check_level(const ModelParams& p, int n) {
    if (n < 0 || n > p.n_bath) {
        throw std::domain_error("boson level " + std::to_string(n) + " outside [0, " +
                                std::to_string(p.n_bath) + "]");
    }
}

} // namespace

SpectralPair spectral_pair(const ModelParams& p, int n) {
    check_level(p, n);
    const double N = p.n_bath;
    const double d0 = p.detuning();
    const double e2 = p.epsilon * p.epsilon;
    SpectralPair sp;
    sp.level = n;
    sp.eta = std::sqrt(d0 * d0 + 4.0 * e2 * (n + 1.0) * (1.0 - n / (2.0 * N)));
    sp.eta_prime = std::sqrt(d0 * d0 + 4.0 * e2 * n * (1.0 - (n - 1.0) / (2.0 * N)));
    return sp;
}

double partition_function(const ModelParams& p) {
    p.validate();
    const double b = p.thermal_exponent();
    const double N = p.n_bath;
    detail::NeumaierSum z;
    for (int n = 0; n <= p.n_bath; ++n) z += std::exp(-b * (n / (2.0 * N) - 0.5));
    return z.value();
}

std::vector<double> thermal_weights(const ModelParams& p) {
    p.validate();
    const double b = p.thermal_exponent();
    const double N = p.n_bath;
    // exp(-b n / 2N) relative to the n = 0 level
    std::vector<double> w(static_cast<std::size_t>(p.n_bath) + 1);
    detail::NeumaierSum z;
    for (int n = 0; n <= p.n_bath; ++n) {
        w[n] = std::exp(-b * n / (2.0 * N));
        z += w[n];
    }
    const double total = z.value();
    for (double& x : w) x /= total;
    return w;
}

double thermal_weight(const ModelParams& p, int n) {
    check_level(p, n);
    return thermal_weights(p)[n];
}

std::string to_string(DeltaForm form) {
    return form == DeltaForm::exact ? "exact" : "unconjugated";
}

DeltaForm delta_form_from_string(const std::string& name) {
    if (name == "exact") return DeltaForm::exact;
    if (name == "unconjugated") return DeltaForm::unconjugated;
    throw std::invalid_argument("unknown delta form '" + name + "'");
}

} // namespace cspin
