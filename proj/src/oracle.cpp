#include "cspin/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "cspin/detail/summation.hpp"
#include "cspin/ode.hpp"

namespace cspin::oracle {

namespace {

using Vec2 = Eigen::Vector2cd;
constexpr cplx I{0.0, 1.0};

double defect(cplx amp, cplx partner, double multiplicity) {
    return std::abs(std::norm(amp) + multiplicity * std::norm(partner) - 1.0);
}

ode::Options block_options(double tol) {
    ode::Options opt;
    opt.rtol = tol;
    opt.atol = tol * 1e-2;
    return opt;
}

} // namespace

double BlockAmplitudes::unitarity_defect_excited() const noexcept {
    return defect(a1, b1, level + 1.0);
}

double BlockAmplitudes::unitarity_defect_ground() const noexcept {
    return defect(c1, d1, static_cast<double>(level));
}

BlockAmplitudes integrate_blocks(const ModelParams& p, int n, double t, double tol) {
    p.validate();
    if (n < 0 || n > p.n_bath) throw std::domain_error("block level out of range");
    if (!(t >= 0.0)) throw std::domain_error("block time must be non-negative");
    if (!(tol > 0.0)) throw std::invalid_argument("block tolerance must be positive");

    const double N = p.n_bath;
    const double w0 = p.omega0;
    const double w = p.omega;
    const double eps = p.epsilon;

    BlockAmplitudes out;
    out.level = n;
    out.time = t;
    const auto opt = block_options(tol);

    // |1,n> coupled to |0,n+1>; B1 scaled so that the physical amplitude is sqrt(n+1) B1
    {
        const double root = std::sqrt(1.0 - n / (2.0 * N));
        const double ea = w0 / 2.0 - w * (1.0 - n / (2.0 * N));
        const double eb = w0 / 2.0 + w * (1.0 - (n + 1.0) / (2.0 * N));
        auto rhs = [&](double, const Vec2& y) {
            Vec2 dy;
            dy[0] = -I * ea * y[0] - I * eps * root * (n + 1.0) * y[1];
            dy[1] = I * eb * y[1] - I * eps * root * y[0];
            return dy;
        };
        Vec2 y(cplx{1.0, 0.0}, cplx{0.0, 0.0});
        ode::integrate(rhs, 0.0, t, y, opt, [&](double, const Vec2& s) {
            out.max_unitarity_defect = std::max(out.max_unitarity_defect, defect(s[0], s[1], n + 1.0));
        });
        out.a1 = y[0];
        out.b1 = y[1];
    }
    // |0,n> coupled to |1,n-1>; D1 scaled so that the physical amplitude is sqrt(n) D1
    {
        const double root = std::sqrt(1.0 - (n - 1.0) / (2.0 * N));
        const double ec = w0 / 2.0 + w * (1.0 - n / (2.0 * N));
        const double ed = w0 / 2.0 - w * (1.0 - (n - 1.0) / (2.0 * N));
        auto rhs = [&](double, const Vec2& y) {
            Vec2 dy;
            dy[0] = I * ec * y[0] - I * eps * static_cast<double>(n) * root * y[1];
            dy[1] = -I * ed * y[1] - I * eps * root * y[0];
            return dy;
        };
        Vec2 y(cplx{1.0, 0.0}, cplx{0.0, 0.0});
        ode::integrate(rhs, 0.0, t, y, opt, [&](double, const Vec2& s) {
            out.max_unitarity_defect =
                std::max(out.max_unitarity_defect, defect(s[0], s[1], static_cast<double>(n)));
        });
        out.c1 = y[0];
        out.d1 = y[1];
    }
    return out;
}

MapCoefficients assemble_map_from_blocks(const ModelParams& p, double t, double tol) {
    const auto weights = thermal_weights(p);
    detail::NeumaierSum alpha;
    detail::NeumaierSum beta;
    detail::ComplexNeumaierSum delta;
    for (int n = 0; n <= p.n_bath; ++n) {
        const auto blk = integrate_blocks(p, n, t, tol);
        const double w = weights[n];
        alpha += w * (n + 1.0) * std::norm(blk.b1);
        beta += w * n * std::norm(blk.d1);
        delta += w * blk.a1 * std::conj(blk.c1);
    }
    MapCoefficients c;
    c.alpha = alpha.value();
    c.beta = beta.value();
    c.delta = delta.value();
    c.time = t;
    return c;
}

Eigen::MatrixXcd joint_hamiltonian(const ModelParams& p) {
    p.validate();
    if (p.n_bath > kMaxJointBath) {
        throw std::length_error("joint evolution supports N <= " + std::to_string(kMaxJointBath) +
                                "; use the per-level block oracle for larger baths");
    }
    const int levels = p.n_bath + 2;
    const double N = p.n_bath;
    const auto idx = [levels](int s, int n) { return s * levels + n; };

    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * levels, 2 * levels);
    for (int n = 0; n < levels; ++n) {
        const double bath = -0.5 * p.omega * (1.0 - n / N);
        h(idx(0, n), idx(0, n)) = 0.5 * p.omega0 + bath;
        h(idx(1, n), idx(1, n)) = -0.5 * p.omega0 + bath;
        if (n + 1 < levels) {
            // sigma_+ sqrt(1 - n/2N) b  and its conjugate
            const double g = p.epsilon * std::sqrt((n + 1.0) * (1.0 - n / (2.0 * N)));
            h(idx(0, n), idx(1, n + 1)) = g;
            h(idx(1, n + 1), idx(0, n)) = g;
        }
    }
    return h;
}

double excitation_commutator_norm(const ModelParams& p) {
    const auto h = joint_hamiltonian(p);
    const int levels = p.n_bath + 2;
    Eigen::VectorXd x(2 * levels);
    for (int n = 0; n < levels; ++n) {
        x[n] = 0.5 + n;
        x[levels + n] = -0.5 + n;
    }
    const Eigen::MatrixXcd xm = x.cast<cplx>().asDiagonal();
    return (h * xm - xm * h).norm();
}

namespace {

Eigen::MatrixXcd joint_propagator(const ModelParams& p, double t) {
    const auto h = joint_hamiltonian(p);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const Eigen::VectorXcd phases =
        (es.eigenvalues().cast<cplx>() * cplx{0.0, -t}).array().exp().matrix();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

QubitState reduce(const ModelParams& p, const Eigen::MatrixXcd& u, const QubitState& rho0) {
    const int levels = p.n_bath + 2;
    const auto weights = thermal_weights(p);
    Eigen::MatrixXcd bath = Eigen::MatrixXcd::Zero(levels, levels);
    for (int n = 0; n <= p.n_bath; ++n) bath(n, n) = weights[n];
    const Eigen::Matrix2cd sys = rho0.matrix();
    Eigen::MatrixXcd rho(2 * levels, 2 * levels);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) rho.block(a * levels, b * levels, levels, levels) = sys(a, b) * bath;
    const Eigen::MatrixXcd rho_t = u * rho * u.adjoint();

    Eigen::Matrix2cd reduced;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) reduced(a, b) = rho_t.block(a * levels, b * levels, levels, levels).trace();
    return QubitState::from_matrix(reduced);
}

} // namespace

QubitState joint_unitary_evolve(const ModelParams& p, const QubitState& rho0, double t) {
    return reduce(p, joint_propagator(p, t), rho0);
}

MapCoefficients joint_map_coefficients(const ModelParams& p, double t) {
    const auto u = joint_propagator(p, t);
    MapCoefficients c;
    c.time = t;
    c.alpha = 1.0 - reduce(p, u, QubitState::excited()).rho11();
    c.beta = reduce(p, u, QubitState::ground()).rho11();
    c.delta = 2.0 * reduce(p, u, QubitState::maximally_coherent()).rho12();
    return c;
}

std::vector<OraclePoint> oracle_grid(int points, unsigned long seed) {
    static constexpr int kBaths[] = {1, 2, 5, 10};
    static constexpr double kTemps[] = {0.1, 1.0, 10.0, 0.0}; // 0 stands for infinite
    static constexpr double kEps[] = {0.1, 0.5, 1.0};
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick4(0, 3), pick3(0, 2);
    std::uniform_real_distribution<double> freq(0.5, 2.0), time(0.0, 50.0);
    std::vector<OraclePoint> out(static_cast<std::size_t>(points));
    for (auto& pt : out) {
        pt.params.n_bath = kBaths[pick4(rng)];
        const double temp = kTemps[pick4(rng)];
        pt.params.temperature = temp > 0.0 ? Temperature(temp) : Temperature::infinite();
        pt.params.epsilon = kEps[pick3(rng)];
        pt.params.omega0 = freq(rng);
        pt.params.omega = freq(rng);
        pt.time = time(rng);
    }
    return out;
}

void evaluate_oracle_point(OraclePoint& pt, double block_tol) {
    const auto closed = map_coefficients(pt.params, pt.time);
    const auto dev = [&](const MapCoefficients& o) {
        return std::max({std::abs(closed.alpha - o.alpha), std::abs(closed.beta - o.beta),
                         std::abs(closed.delta - o.delta)});
    };
    const auto blocks = assemble_map_from_blocks(pt.params, pt.time, block_tol);
    pt.block_deviation = dev(blocks);
    pt.unitarity_defect = 0.0;
    for (int n = 0; n <= pt.params.n_bath; ++n)
        pt.unitarity_defect =
            std::max(pt.unitarity_defect, integrate_blocks(pt.params, n, pt.time, block_tol).max_unitarity_defect);
    pt.joint_deviation = pt.params.n_bath <= kMaxJointBath ? dev(joint_map_coefficients(pt.params, pt.time))
                                                           : std::numeric_limits<double>::quiet_NaN();
}

} // namespace cspin::oracle
