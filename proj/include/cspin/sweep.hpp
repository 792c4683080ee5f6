// sweep.hpp: parameter sweeps over one model parameter or the initial state

#pragma once

#include <map>
#include <string>
#include <vector>

#include "cspin/core_map.hpp"
#include "cspin/model.hpp"

namespace cspin {

enum class SweepAxis { temperature, epsilon, n_bath, time, rho11_0 };
enum class Observable { coherence, entanglement, d_balance, sigma, trapping, population_ratio, rates };

const char* to_string(SweepAxis a);
const char* to_string(Observable o);
SweepAxis sweep_axis_from_string(const std::string& s);
Observable observable_from_string(const std::string& s);

struct TimeGrid {
    double start{0.0};
    double end{10.0};
    int steps{100}; // number of intervals; steps + 1 sample times

    std::vector<double> times() const;
};

struct SweepSpec {
    ModelParams base;
    SweepAxis axis{SweepAxis::temperature};
    std::vector<double> values;
    Observable observable{Observable::coherence};
    TimeGrid time_grid;
    QubitState initial_state{QubitState::maximally_coherent()};
    int workers{0}; // 0: hardware concurrency

    // Throws std::invalid_argument on an empty axis, a bad grid or an unsupported
    // axis/observable pair.
    void validate() const;
};

struct SweepRow {
    double axis_value{0.0};
    double time{0.0};
    std::vector<double> values;
    std::string flags; // '|'-joined: pole, undefined, pathology, long_time, zero_denominator
};

struct SweepResult {
    std::string axis;
    std::vector<std::string> columns; // observable value columns
    std::vector<SweepRow> rows;
    std::map<std::string, std::string> metadata;
};

// Long-time observables (trapping, population_ratio) produce one row per axis value
// with time = +inf and the long_time flag.
SweepResult run_sweep(const SweepSpec& spec);

// rho11_bar / rho22_bar of the averaged state; axis must be rho11_0 or epsilon.
SweepResult population_ratio_longtime(const SweepSpec& spec);

// Named presets (omega0 = omega = 1, natural units). The parameter values are
// reconstructions chosen to show each effect, not measured values.
std::vector<std::string> preset_names();
SweepSpec preset(const std::string& name);

inline constexpr const char* kCodeVersion = "cspin 0.1.0";

} // namespace cspin
