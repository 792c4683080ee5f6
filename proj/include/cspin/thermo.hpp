// thermo.hpp: time-local master equation and its thermodynamic diagnostics
//
// The map is generated exactly by
//
//   d rho/dt = -i[delta(t) sigma_z, rho] + G_dis D[sigma_-] rho + G_abs D[sigma_+] rho
//              + G_deph D[sigma_z] rho
//
// with sigma_- = |0><1|. In components:
//
//   d rho11/dt = -G_dis rho11 + G_abs rho22
//   d rho12/dt = (-(G_dis + G_abs)/2 - 2 G_deph - 2i delta) rho12
//
// and the rates follow from the map coefficients by inverting these relations.

#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "cspin/core_map.hpp"
#include "cspin/model.hpp"
#include "cspin/ode.hpp"

namespace cspin {

// |1 - alpha - beta| or |Delta| below this marks a rate pole.
inline constexpr double kPoleThreshold = 1e-10;
// Thermo scans drop samples this close (natural time) to a detected pole.
inline constexpr double kPoleExclusion = 1e-3;

struct LindbladRates {
    double gamma_dis{0.0};
    double gamma_abs{0.0};
    double gamma_deph{0.0};
    double delta_shift{0.0};
    double time{0.0};
    bool pole_flag{false};
};

LindbladRates lindblad_rates(const ReducedMap& map, double t);
LindbladRates lindblad_rates(const ModelParams& params, double t);

enum class PoleKind { population, coherence };

struct Pole {
    double time{0.0};
    PoleKind kind{PoleKind::population};
};

// Zeros of 1 - alpha - beta (sign changes, bisected) and of |Delta| (local minima
// refined by golden section and kept when below kPoleThreshold). step <= 0 picks
// 1/20 of the fastest Rabi period.
std::vector<Pole> find_poles(const ReducedMap& map, double t0, double t1, double step = 0.0);

struct MasterTrajectory {
    std::vector<double> times;
    std::vector<QubitState> states;
    std::optional<Pole> halted_at; // set when a pole cut the requested window short
    ode::Stats stats;

    bool complete() const noexcept { return !halted_at.has_value(); }
};

// Adaptive Dormand-Prince integration of the master equation. Output times must be
// non-negative and increasing. Integration stops kPoleExclusion before the first
// pole; later output times are dropped and the pole is reported.
MasterTrajectory integrate_master(const ModelParams& params, const QubitState& rho0,
                                  std::span<const double> output_times, double tol);
MasterTrajectory integrate_master(const ModelParams& params, const QubitState& rho0,
                                  double t_end, double tol, int outputs = 101);

struct BalanceSample {
    double time{0.0};
    double ratio{0.0};         // G_dis P_a / (G_abs P_b), P_a the larger eigenvalue
    double rotated_ratio{0.0}; // same with transition rates taken in the eigenbasis of rho(t)
    double p_a{0.5};
    double p_b{0.5};
    bool defined{false};       // false on a vanishing denominator or a rate pole
    bool pole_flag{false};
};

BalanceSample detailed_balance(const ReducedMap& map, const QubitState& rho0, double t);
BalanceSample detailed_balance(const ModelParams& params, const QubitState& rho0, double t);

struct ThermoSample {
    double time{0.0};
    double d_balance{0.0};
    double d_rotated{0.0};
    double sigma{0.0};
    double phi{0.0};
    double entropy{0.0};
    double entropy_rate{0.0};
    double p_a{0.5};
    double p_b{0.5};
    double flux_dis{0.0}; // G_dis P_a
    double flux_abs{0.0}; // G_abs P_b
    bool d_defined{false};
    bool sigma_pathology{false}; // fluxes of opposite sign or one of them zero
    bool pole_flag{false};
};

ThermoSample entropy_production(const ReducedMap& map, const QubitState& rho0, double t);
ThermoSample entropy_production(const ModelParams& params, const QubitState& rho0, double t);

struct Interval {
    double start{0.0};
    double end{0.0};
    double length() const noexcept { return end - start; }
};

// Maximal intervals on which f < 0, located on the grid and refined by bisection
// inside cells whose endpoints change sign. Non-finite samples count as neither sign
// and end an interval at the preceding grid point.
template <class F>
std::vector<Interval> negative_intervals(F&& f, std::span<const double> grid);

// Intervals where min(G_dis, G_abs, G_deph) < 0.
std::vector<Interval> non_markovianity_witness(const ModelParams& params,
                                               std::span<const double> t_grid);

double total_length(const std::vector<Interval>& intervals);
// Measure of the symmetric difference of two sorted, disjoint interval lists.
double symmetric_difference(const std::vector<Interval>& a, const std::vector<Interval>& b);

// ---------------------------------------------------------------------------

template <class F>
std::vector<Interval> negative_intervals(F&& f, std::span<const double> grid) {
    std::vector<Interval> out;
    if (grid.empty()) return out;
    auto refine = [&](double lo, double hi, bool lo_negative) {
        for (int it = 0; it < 60 && hi - lo > 1e-13 * (1.0 + std::abs(hi)); ++it) {
            const double mid = 0.5 * (lo + hi);
            const double v = f(mid);
            if (!std::isfinite(v)) break;
            if ((v < 0.0) == lo_negative) lo = mid;
            else hi = mid;
        }
        return 0.5 * (lo + hi);
    };

    bool has_open = false;
    double open = 0.0;
    double prev_t = grid[0];
    double prev_v = f(prev_t);
    if (std::isfinite(prev_v) && prev_v < 0.0) {
        open = prev_t;
        has_open = true;
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double t = grid[i];
        const double v = f(t);
        const bool prev_ok = std::isfinite(prev_v);
        const bool ok = std::isfinite(v);
        if (!ok) {
            if (has_open) out.push_back({open, prev_t});
            has_open = false;
        } else if (!prev_ok) {
            if (v < 0.0) {
                open = t;
                has_open = true;
            }
        } else if (prev_v >= 0.0 && v < 0.0) {
            open = refine(prev_t, t, false);
            has_open = true;
        } else if (prev_v < 0.0 && v >= 0.0) {
            if (has_open) out.push_back({open, refine(prev_t, t, true)});
            has_open = false;
        }
        prev_t = t;
        prev_v = v;
    }
    if (has_open) out.push_back({open, prev_t});
    return out;
}

} // namespace cspin
