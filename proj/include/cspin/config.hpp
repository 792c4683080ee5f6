// config.hpp: INI run configuration with unit conversion and env overrides
//
// Grammar (one key = value per line, '#' or ';' comments, keys case-sensitive):
//
//   [model]      units = natural|physical, omega0, omega, epsilon, n_bath,
//                temperature (number or inf), delta_form = exact|unconjugated
//   [run]        t_start, t_end, steps, rho11, rho12_re, rho12_im, tol, format = csv|json,
//                out, workers, seed, validate_points
//   [sweep]      preset, axis, values (comma separated), observable
//   [resonance]  eps_min, eps_max, count, threshold
//
// With units = physical, frequencies are angular frequencies in rad/us ("MHz"), times are
// in microseconds and the temperature is in kelvin. The natural frequency unit is then
// 1 rad/us and T converts as k_B T / (hbar * 1e6).

#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "cspin/model.hpp"
#include "cspin/sweep.hpp"

namespace cspin {

namespace constants {
// CODATA 2018 exact values
inline constexpr double hbar = 1.054571817e-34; // J s
inline constexpr double k_boltzmann = 1.380649e-23; // J/K
inline constexpr double per_microsecond = 1e6;  // s^-1
} // namespace constants

// Kelvin to natural temperature when the frequency unit is rad/us.
double kelvin_to_natural(double kelvin);

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Units { natural, physical };
enum class OutputFormat { csv, json };

struct ResonanceSettings {
    double eps_min{0.1};
    double eps_max{2.0};
    int count{1000};
    double threshold{1e-8};
};

struct RunConfig {
    Units units{Units::natural};
    ModelParams model;
    TimeGrid grid{0.0, 10.0, 100};
    QubitState rho0{QubitState::excited()};
    double tol{1e-8};
    OutputFormat format{OutputFormat::csv};
    std::string out_path; // empty: stdout
    int workers{0};
    unsigned long seed{12345};
    int validate_points{40};
    std::optional<SweepSpec> sweep;
    ResonanceSettings resonance;
};

// Parses INI text. Throws ConfigError on syntax errors, unknown sections or keys, and
// invalid values.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// CSPIN_OUT and CSPIN_WORKERS, when set, replace out_path and workers.
void apply_environment(RunConfig& cfg);

OutputFormat output_format_from_string(const std::string& s);

} // namespace cspin
