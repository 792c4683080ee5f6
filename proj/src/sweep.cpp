#include "cspin/sweep.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "cspin/detail/parallel.hpp"
#include "cspin/longtime.hpp"
#include "cspin/quantumness.hpp"
#include "cspin/table.hpp"
#include "cspin/thermo.hpp"

namespace cspin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool long_time(Observable o) { return o == Observable::trapping || o == Observable::population_ratio; }

bool state_independent(Observable o) {
    return o == Observable::entanglement || o == Observable::rates || o == Observable::trapping;
}

std::vector<std::string> columns_of(Observable o) {
    switch (o) {
    case Observable::coherence: return {"coherence"};
    case Observable::entanglement: return {"entanglement"};
    case Observable::d_balance: return {"d_balance", "d_rotated"};
    case Observable::sigma: return {"sigma", "phi", "entropy"};
    case Observable::trapping: return {"trapping", "alpha_bar", "beta_bar"};
    case Observable::population_ratio: return {"ratio", "rho11_bar", "rho22_bar"};
    case Observable::rates: return {"gamma_dis", "gamma_abs", "gamma_deph", "delta_shift"};
    }
    return {};
}

void add_flag(std::string& flags, const char* f) {
    if (!flags.empty()) flags += '|';
    flags += f;
}

struct Point {
    ModelParams params;
    QubitState rho0;
};

Point point_for(const SweepSpec& spec, double v) {
    Point pt{spec.base, spec.initial_state};
    switch (spec.axis) {
    case SweepAxis::temperature: pt.params.temperature = Temperature(v); break;
    case SweepAxis::epsilon: pt.params.epsilon = v; break;
    case SweepAxis::n_bath: pt.params.n_bath = static_cast<int>(v); break;
    case SweepAxis::rho11_0: pt.rho0 = QubitState(v, 0.0); break;
    case SweepAxis::time: break;
    }
    pt.params.validate();
    return pt;
}

SweepRow time_row(const ReducedMap& map, const SweepSpec& spec, const QubitState& rho0, double v, double t) {
    SweepRow row{v, t, {}, {}};
    switch (spec.observable) {
    case Observable::coherence:
        row.values = {l1_coherence(rho0) * std::abs(map.at(t).delta)};
        break;
    case Observable::entanglement:
        row.values = {entanglement_evolution(map, 1.0, t)};
        break;
    case Observable::d_balance: {
        const auto b = detailed_balance(map, rho0, t);
        row.values = {b.ratio, b.rotated_ratio};
        if (b.pole_flag) add_flag(row.flags, "pole");
        if (!b.defined || !std::isfinite(b.rotated_ratio)) add_flag(row.flags, "undefined");
        break;
    }
    case Observable::sigma: {
        const auto s = entropy_production(map, rho0, t);
        row.values = {s.sigma, s.phi, s.entropy};
        if (s.pole_flag) add_flag(row.flags, "pole");
        if (s.sigma_pathology || !std::isfinite(s.sigma) || !std::isfinite(s.phi)) add_flag(row.flags, "pathology");
        break;
    }
    case Observable::rates: {
        const auto g = lindblad_rates(map, t);
        row.values = {g.gamma_dis, g.gamma_abs, g.gamma_deph, g.delta_shift};
        if (g.pole_flag) add_flag(row.flags, "pole");
        break;
    }
    default: throw std::logic_error("not a time-resolved observable");
    }
    return row;
}

SweepRow long_time_row(const SweepSpec& spec, const Point& pt, double v) {
    SweepRow row{v, kInf, {}, "long_time"};
    const auto avg = averaged_populations(pt.params);
    if (spec.observable == Observable::trapping) {
        row.values = {std::abs(avg.beta_bar - avg.alpha_bar), avg.alpha_bar, avg.beta_bar};
    } else {
        const double r11 = pt.rho0.rho11() * (1.0 - avg.alpha_bar) + pt.rho0.rho22() * avg.beta_bar;
        const double r22 = 1.0 - r11;
        if (r22 == 0.0) {
            row.values = {kInf, r11, r22};
            add_flag(row.flags, "zero_denominator");
        } else {
            row.values = {r11 / r22, r11, r22};
        }
    }
    return row;
}

std::string describe(const ModelParams& p) {
    return "omega0=" + format_double(p.omega0) + " omega=" + format_double(p.omega) +
           " epsilon=" + format_double(p.epsilon) + " n_bath=" + std::to_string(p.n_bath) +
           " temperature=" + format_double(p.temperature.value()) + " delta_form=" + to_string(p.delta_form);
}

} // namespace

const char* to_string(SweepAxis a) {
    switch (a) {
    case SweepAxis::temperature: return "temperature";
    case SweepAxis::epsilon: return "epsilon";
    case SweepAxis::n_bath: return "n_bath";
    case SweepAxis::time: return "time";
    case SweepAxis::rho11_0: return "rho11_0";
    }
    return "?";
}

const char* to_string(Observable o) {
    switch (o) {
    case Observable::coherence: return "coherence";
    case Observable::entanglement: return "entanglement";
    case Observable::d_balance: return "d_balance";
    case Observable::sigma: return "sigma";
    case Observable::trapping: return "trapping";
    case Observable::population_ratio: return "population_ratio";
    case Observable::rates: return "rates";
    }
    return "?";
}

SweepAxis sweep_axis_from_string(const std::string& s) {
    for (auto a : {SweepAxis::temperature, SweepAxis::epsilon, SweepAxis::n_bath, SweepAxis::time, SweepAxis::rho11_0})
        if (s == to_string(a)) return a;
    throw std::invalid_argument("unknown sweep axis '" + s + "'");
}

Observable observable_from_string(const std::string& s) {
    for (auto o : {Observable::coherence, Observable::entanglement, Observable::d_balance, Observable::sigma,
                   Observable::trapping, Observable::population_ratio, Observable::rates})
        if (s == to_string(o)) return o;
    throw std::invalid_argument("unknown observable '" + s + "'");
}

std::vector<double> TimeGrid::times() const {
    std::vector<double> out(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i) out[i] = i == steps ? end : start + (end - start) * i / steps;
    return out;
}

void SweepSpec::validate() const {
    base.validate();
    if (values.empty()) throw std::invalid_argument("sweep needs at least one axis value");
    if (long_time(observable) && axis == SweepAxis::time)
        throw std::invalid_argument(std::string("observable ") + to_string(observable) + " has no time axis");
    if (axis == SweepAxis::rho11_0 && state_independent(observable))
        throw std::invalid_argument(std::string("observable ") + to_string(observable) +
                                    " does not depend on the initial state");
    if (axis != SweepAxis::time && !long_time(observable)) {
        if (!(time_grid.steps >= 1) || !(time_grid.end > time_grid.start) || !(time_grid.start >= 0.0))
            throw std::invalid_argument("time grid must be non-negative and strictly increasing");
    }
    if (!initial_state.is_valid()) throw std::invalid_argument("initial state is not a density matrix");
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = values[i];
        switch (axis) {
        case SweepAxis::time:
            if (!(v >= 0.0) || (i > 0 && !(v > values[i - 1])))
                throw std::invalid_argument("time values must be non-negative and increasing");
            break;
        case SweepAxis::n_bath:
            if (!(v >= 1.0) || v != std::floor(v) || v > 1e8) throw std::invalid_argument("n_bath values must be integers >= 1");
            break;
        case SweepAxis::rho11_0:
            if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("rho11_0 values must lie in [0, 1]");
            break;
        default:
            (void)point_for(*this, v);
        }
    }
}

SweepResult run_sweep(const SweepSpec& spec) {
    spec.validate();
    SweepResult out;
    out.axis = to_string(spec.axis);
    out.columns = columns_of(spec.observable);
    out.metadata = {
        {"code_version", kCodeVersion},
        {"observable", to_string(spec.observable)},
        {"axis", to_string(spec.axis)},
        {"base_params", describe(spec.base)},
        {"initial_state", "rho11=" + format_double(spec.initial_state.rho11()) +
                              " rho12=" + format_double(spec.initial_state.rho12().real()) +
                              (spec.initial_state.rho12().imag() < 0 ? "" : "+") +
                              format_double(spec.initial_state.rho12().imag()) + "i"},
        {"time_grid", format_double(spec.time_grid.start) + ":" + format_double(spec.time_grid.end) + ":" +
                          std::to_string(spec.time_grid.steps)},
        {"pole_threshold", format_double(kPoleThreshold)},
    };

    const bool by_time = spec.axis == SweepAxis::time;
    const auto grid = spec.time_grid.times();
    auto blocks = detail::parallel_map<std::vector<SweepRow>>(
        by_time ? 1 : spec.values.size(), spec.workers, [&](std::size_t i) {
            std::vector<SweepRow> rows;
            if (by_time) {
                const ReducedMap map(spec.base);
                for (const double t : spec.values) rows.push_back(time_row(map, spec, spec.initial_state, t, t));
                return rows;
            }
            const double v = spec.values[i];
            const Point pt = point_for(spec, v);
            if (long_time(spec.observable)) {
                rows.push_back(long_time_row(spec, pt, v));
                return rows;
            }
            const ReducedMap map(pt.params);
            for (const double t : grid) rows.push_back(time_row(map, spec, pt.rho0, v, t));
            return rows;
        });
    for (auto& b : blocks)
        for (auto& r : b) out.rows.push_back(std::move(r));
    return out;
}

SweepResult population_ratio_longtime(const SweepSpec& spec) {
    if (spec.axis != SweepAxis::rho11_0 && spec.axis != SweepAxis::epsilon)
        throw std::invalid_argument("population ratio sweeps run over rho11_0 or epsilon");
    SweepSpec s = spec;
    s.observable = Observable::population_ratio;
    return run_sweep(s);
}

std::vector<std::string> preset_names() {
    return {"coherence_vs_temperature", "entanglement_vs_temperature", "d_balance_small_bath",
            "sigma_small_bath", "trapping_vs_temperature", "population_ratio_vs_rho11",
            "population_ratio_vs_epsilon"};
}

SweepSpec preset(const std::string& name) {
    SweepSpec s;
    s.base.omega0 = 1.0;
    s.base.omega = 1.0;
    if (name == "coherence_vs_temperature" || name == "entanglement_vs_temperature") {
        s.base.epsilon = 0.1;
        s.base.n_bath = 100;
        s.axis = SweepAxis::temperature;
        s.values = {0.01, 1.0, 100.0};
        s.observable = name[0] == 'c' ? Observable::coherence : Observable::entanglement;
        s.time_grid = {0.0, 200.0, 400};
    } else if (name == "d_balance_small_bath" || name == "sigma_small_bath") {
        s.base.epsilon = 1.0;
        s.base.n_bath = 2;
        s.base.temperature = Temperature(1.0);
        s.axis = SweepAxis::n_bath;
        s.values = {2.0};
        s.observable = name[0] == 'd' ? Observable::d_balance : Observable::sigma;
        s.initial_state = QubitState(0.8, 0.2);
        s.time_grid = {0.0, 20.0, 2000};
    } else if (name == "trapping_vs_temperature") {
        s.base.epsilon = 0.5;
        s.base.n_bath = 10;
        s.axis = SweepAxis::temperature;
        s.values = {0.01, 0.1, 1.0, 10.0, 100.0};
        s.observable = Observable::trapping;
    } else if (name == "population_ratio_vs_rho11") {
        s.base.epsilon = 0.1;
        s.base.n_bath = 10;
        s.base.temperature = Temperature(1.0);
        s.axis = SweepAxis::rho11_0;
        for (int i = 0; i <= 10; ++i) s.values.push_back(i / 10.0);
        s.observable = Observable::population_ratio;
    } else if (name == "population_ratio_vs_epsilon") {
        s.base.n_bath = 10;
        s.base.temperature = Temperature(1.0);
        s.axis = SweepAxis::epsilon;
        s.values = {0.01, 0.1, 1.0};
        s.observable = Observable::population_ratio;
        s.initial_state = QubitState(0.5, 0.0);
    } else {
        throw std::invalid_argument("unknown preset '" + name + "'");
    }
    return s;
}

} // namespace cspin
