// model.hpp: central-spin parameters and the thermal weights of the boson levels

#pragma once

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace cspin {

using cplx = std::complex<double>;

// Bath temperature in natural units (hbar = k_B = 1). Infinite temperature is a
// distinct value rather than a large float so that the thermal exponent is exactly 0.
class Temperature {
public:
    constexpr Temperature() = default;
    explicit Temperature(double value);

    static constexpr Temperature infinite() { return Temperature{}; }

    bool is_infinite() const noexcept { return infinite_; }
    // +inf when infinite
    double value() const noexcept {
        return infinite_ ? std::numeric_limits<double>::infinity() : value_;
    }

    friend bool operator==(const Temperature&, const Temperature&) = default;

private:
    double value_{0.0};
    bool infinite_{true};
};

// How the bath-averaged coherence factor Delta(t) combines the two branch amplitudes.
//  exact        : sum_n w_n A1(n,t) conj(C1(n,t)), the reduced dynamics of the joint unitary.
//  unconjugated : the same product without the conjugate on C1. Not a valid reduction of
//                 the joint evolution; retained to compare against curves computed that way.
enum class DeltaForm { exact, unconjugated };

struct ModelParams {
    double omega0{1.0};   // central spin splitting
    double omega{1.0};    // bath frequency (enters as omega/N per spin)
    double epsilon{0.0};  // system-bath coupling
    int n_bath{1};        // number of bath spins N
    Temperature temperature{Temperature::infinite()};
    DeltaForm delta_form{DeltaForm::exact};

    // Throws std::invalid_argument on a violated invariant.
    void validate() const;

    // b = omega / T, exactly 0 at infinite temperature.
    double thermal_exponent() const noexcept;
    // omega0 - omega / 2N, signed.
    double detuning() const noexcept;
};

struct SpectralPair {
    double eta{0.0};
    double eta_prime{0.0};
    int level{0};
};

// eta(n), eta'(n) for boson level 0 <= n <= N. Throws std::domain_error otherwise.
SpectralPair spectral_pair(const ModelParams& params, int n);

// Z = sum_{n=0}^{N} exp(-b (n/2N - 1/2)). May overflow to +inf for extreme b.
double partition_function(const ModelParams& params);

// Normalized Boltzmann weight of level n. Evaluated in shifted-log form so it stays
// finite even when Z itself overflows.
double thermal_weight(const ModelParams& params, int n);

// All N+1 weights; sums to 1.
std::vector<double> thermal_weights(const ModelParams& params);

std::string to_string(DeltaForm form);
DeltaForm delta_form_from_string(const std::string& name);

} // namespace cspin
