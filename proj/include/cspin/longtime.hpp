// longtime.hpp: long-time averaged map and resonances of the coherence factor
//
// Delta(t) is a finite sum of complex exponentials e^{i nu t} with
//   nu = -omega/2N + (+-eta(n) +- eta(n-1))/2,
// so its Cesaro average vanishes unless some nu is zero. That happens when
// omega/N = |eta(n) - eta(n-1)| (minus branch) or eta(n) + eta(n-1) (plus branch).
// Squaring either branch gives the same quadratic in n,
//   A n^2 - B n + C = 0,  A = eps^4/N^2 + eps^2 omega^2/2N^3,  B = 2N A,
// whose roots are N +- sqrt(B^2 - 4AC)/2A.

#pragma once

#include <span>
#include <utility>
#include <vector>

#include "cspin/core_map.hpp"
#include "cspin/model.hpp"

namespace cspin {

struct AveragedCoefficients {
    double alpha_bar{0.0};
    double beta_bar{0.0};
    cplx delta_bar{0.0, 0.0};
    double horizon{0.0};       // averaging time behind delta_bar (0 when exact)
    bool converged{false};
    bool delta_evaluated{false};
};

// alpha_bar and beta_bar from sin^2 -> 1/2; delta_bar left unevaluated.
AveragedCoefficients averaged_populations(const ModelParams& params);

// Trapezoidal Cesaro mean of Delta over [0, horizon] with step at most 1/20 of the
// fastest period. Evaluated through the exact geometric sum of every exponential
// component, so the cost does not grow with the horizon.
cplx cesaro_delta(const ModelParams& params, double horizon);

struct DeltaAverage {
    cplx value{0.0, 0.0};
    double horizon{0.0};
    bool converged{false};
    bool analytic_zero{false}; // no component is resonant; value is exactly 0
};

inline constexpr double kDeltaStartHorizon = 1e4;
inline constexpr int kDeltaMaxDoublings = 24;

// Doubles the horizon from kDeltaStartHorizon until the relative change is below
// tolerance; flags non-convergence at the cap.
DeltaAverage delta_average(const ModelParams& params, double tolerance = 1e-3);

// Populations and coherence of the averaged state. The params overload evaluates
// delta_bar with delta_average.
QubitState time_averaged_state(const AveragedCoefficients& avg, const QubitState& rho0);
QubitState time_averaged_state(const ModelParams& params, const QubitState& rho0);
AveragedCoefficients averaged_coefficients(const ModelParams& params, double tolerance = 1e-3);

enum class Branch { minus, plus };
const char* to_string(Branch b);

inline constexpr double kIntegralityTolerance = 1e-6;
inline constexpr double kFrequencyMatchTolerance = 1e-9;

struct ResonanceReport {
    Branch branch{Branch::minus};
    double epsilon{0.0};
    double q1{0.0}, q2{0.0}, q3{0.0}, q4{0.0};
    double discriminant{0.0};           // B^2 - 4AC of the quadratic in n
    std::vector<double> roots;          // real roots, ascending
    std::vector<int> integer_levels;    // levels in [0, N] resonant on this branch
    std::vector<double> epsilon_candidates; // couplings that make some level resonant on this branch

    bool resonant() const noexcept { return !integer_levels.empty(); }
};

// | omega/N - |eta(n) -+ eta(n-1)| |, the frequency mismatch of level n on a branch
// (both sides halved, as in omega/2N = |eta -+ eta'|/2).
double branch_residual(const ModelParams& params, int n, Branch branch);

// Minus branch always; plus branch appended only when N <= omega/omega0.
// Throws std::invalid_argument for epsilon <= 0.
std::vector<ResonanceReport> resonance_levels(const ModelParams& params);

// Couplings at which level m in [0, N] is resonant on the branch, from the quadratic
// in eps^2 at fixed n, ascending.
std::vector<double> epsilon_candidates(const ModelParams& params, Branch branch);

// Large-N heuristic for omega = omega0 = 1: eps = sqrt(N)/(sqrt(2) k), k integer.
std::vector<double> simplified_resonance_epsilons(int n_bath, double eps_lo, double eps_hi);

struct ResonanceHit {
    ResonanceReport report;
    int grid_index{0};        // grid cell [eps_i, eps_{i+1}) holding the candidate
    DeltaAverage delta_bar;
};

// Walks the eps grid of count points over [eps_lo, eps_hi], takes every exact
// candidate inside a cell and keeps it when |delta_bar| > threshold. Ordered by eps.
std::vector<ResonanceHit> resonance_scan(const ModelParams& base, double eps_lo, double eps_hi,
                                         int count, double threshold = 1e-8, int workers = 0);

// |beta_bar - alpha_bar|
double information_trapping(const ModelParams& params);

struct TrappingNumeric {
    double half_norm{0.0};      // max over states of (1/2) || L^2 rho - L rho ||_1
    double full_norm{0.0};      // same with the unnormalized trace norm
    double boundary_max{0.0};   // half-norm maximum over pure states in the grid
    double interior_max{0.0};   // half-norm maximum over mixed states in the grid
    Eigen::Vector3d argmax{0.0, 0.0, 0.0};
    double closed_form{0.0};    // |beta_bar - alpha_bar| for comparison
};

// Bloch-ball grid: Fibonacci points on `shells` spheres of radius k/shells.
std::vector<QubitState> bloch_grid(int points_per_shell, int shells);

TrappingNumeric trapping_numeric(const AveragedCoefficients& avg, std::span<const QubitState> grid);
TrappingNumeric trapping_numeric(const ModelParams& params, std::span<const QubitState> grid);

} // namespace cspin
