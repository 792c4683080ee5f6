#include "cspin/channel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "cspin/thermo.hpp"

namespace cspin {

namespace {

constexpr double kCpTolerance = 1e-12;
constexpr double kCompletenessTolerance = 1e-10;

Eigen::Vector4cd vec(const Eigen::Matrix2cd& k) {
    // index 2*i + s  <->  K[s][i]
    Eigen::Vector4cd v;
    for (int i = 0; i < 2; ++i)
        for (int s = 0; s < 2; ++s) v[2 * i + s] = k(s, i);
    return v;
}

Eigen::Matrix2cd diag(cplx a, cplx b) {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

Eigen::Matrix2cd single(int row, int col, double value) {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(row, col) = value;
    return m;
}

double clamp_sqrt(double x) { return std::sqrt(std::max(0.0, x)); }

} // namespace

double ChoiMatrix::min_eigenvalue() const {
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues()[0];
}

Eigen::Matrix2cd ChoiMatrix::ancilla_marginal() const {
    Eigen::Matrix2cd out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out(i, j) = m(2 * i, 2 * j) + m(2 * i + 1, 2 * j + 1);
    return out;
}

double ChoiMatrix::hermiticity_defect() const {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

ChoiMatrix choi_state(const MapCoefficients& c) {
    ChoiMatrix chi;
    chi.m(0, 0) = 0.5 * (1.0 - c.alpha);
    chi.m(1, 1) = 0.5 * c.alpha;
    chi.m(2, 2) = 0.5 * c.beta;
    chi.m(3, 3) = 0.5 * (1.0 - c.beta);
    chi.m(0, 3) = 0.5 * c.delta;
    chi.m(3, 0) = 0.5 * std::conj(c.delta);
    const double lam = chi.min_eigenvalue();
    if (lam < -kCpTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "Choi state not positive at t=" << c.time << ": smallest eigenvalue " << lam;
        throw CpViolation(msg.str(), lam);
    }
    return chi;
}

Eigen::Matrix2cd KrausSet::completeness() const {
    Eigen::Matrix2cd s = Eigen::Matrix2cd::Zero();
    for (const auto& k : ops) s += k.adjoint() * k;
    return s;
}

double KrausSet::completeness_residual() const {
    return (completeness() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
}

ChoiMatrix KrausSet::choi() const {
    ChoiMatrix chi;
    for (const auto& k : ops) {
        const Eigen::Vector4cd v = vec(k);
        chi.m += 0.5 * v * v.adjoint();
    }
    return chi;
}

KrausSet kraus_operators(const MapCoefficients& c) {
    const ChoiMatrix chi = choi_state(c);
    KrausSet ks;
    ks.theta = std::atan2(c.delta.imag(), c.delta.real());

    // The Choi state splits into the 1x1 blocks {|01>}, {|10>} and the 2x2 block
    // {|00>, |11>}; diagonalizing blockwise keeps the labels attached to the physics
    // when eigenvalues cross.
    ks.ops[0] = single(0, 1, clamp_sqrt(2.0 * chi.m(2, 2).real()));
    ks.ops[1] = single(1, 0, clamp_sqrt(2.0 * chi.m(1, 1).real()));

    Eigen::Matrix2cd block;
    block << chi.m(0, 0), chi.m(0, 3), chi.m(3, 0), chi.m(3, 3);
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(block);
    // ascending eigenvalues: column 1 carries X1 >= X2
    for (int slot = 0; slot < 2; ++slot) {
        const int col = 1 - slot;
        const double lam = std::max(0.0, es.eigenvalues()[col]);
        Eigen::Vector2cd u = es.eigenvectors().col(col);
        const int big = std::abs(u[0]) >= std::abs(u[1]) ? 0 : 1;
        u *= std::conj(u[big]) / std::abs(u[big]);
        const double scale = std::sqrt(2.0 * lam);
        ks.ops[2 + slot] = diag(scale * u[0], scale * u[1]);
        const double ratio = std::abs(u[1]) > 0.0 ? std::abs(u[0]) / std::abs(u[1])
                                                  : std::numeric_limits<double>::infinity();
        (slot == 0 ? ks.x1 : ks.x2) = 2.0 * lam;
        (slot == 0 ? ks.y1 : ks.y2) = ratio;
    }
    return ks;
}

KrausSet kraus_closed_form(const MapCoefficients& c) {
    const double mag = std::abs(c.delta);
    if (!(mag > 1e-10)) throw std::domain_error("closed-form Kraus operators need |Delta| > 1e-10");
    if (!c.is_cp(kCpTolerance)) {
        throw CpViolation("coefficients violate complete positivity", choi_state(c).min_eigenvalue());
    }
    KrausSet ks;
    ks.theta = std::atan2(c.delta.imag(), c.delta.real());
    const double d = c.alpha - c.beta;
    const double root = std::sqrt(d * d + 4.0 * mag * mag);
    ks.x1 = 0.5 * (2.0 - c.alpha - c.beta + root);
    ks.x2 = std::max(0.0, 0.5 * (2.0 - c.alpha - c.beta - root));
    ks.y1 = (root - d) / (2.0 * mag);
    ks.y2 = (root + d) / (2.0 * mag);
    const cplx phase = std::polar(1.0, ks.theta);

    ks.ops[0] = single(0, 1, clamp_sqrt(c.beta));
    ks.ops[1] = single(1, 0, clamp_sqrt(c.alpha));
    const double s1 = std::sqrt(ks.x1 / (1.0 + ks.y1 * ks.y1));
    const double s2 = std::sqrt(ks.x2 / (1.0 + ks.y2 * ks.y2));
    ks.ops[2] = diag(s1 * ks.y1 * phase, s1);
    ks.ops[3] = diag(-s2 * ks.y2 * phase, s2);
    return ks;
}

QubitState apply_kraus(const KrausSet& ks, const QubitState& rho) {
    const double res = ks.completeness_residual();
    if (!(res <= kCompletenessTolerance)) {
        std::ostringstream msg;
        msg << "Kraus set is not complete (residual " << res << ")";
        throw std::domain_error(msg.str());
    }
    const Eigen::Matrix2cd r = rho.matrix();
    Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
    for (const auto& k : ks.ops) out += k * r * k.adjoint();
    return QubitState::from_matrix(out);
}

CpIntegrals cp_divisibility_integrals(const ModelParams& params, double t, double grid_step) {
    if (!(t > 0.0)) throw std::invalid_argument("integration time must be positive");
    if (!(grid_step > 0.0)) throw std::invalid_argument("grid step must be positive");
    const ReducedMap map(params);
    const auto poles = find_poles(map, 0.0, t);
    const auto near_pole = [&](double lo, double hi) {
        return std::any_of(poles.begin(), poles.end(), [&](const Pole& p) {
            return p.time >= lo - kPoleExclusion && p.time <= hi + kPoleExclusion;
        });
    };

    const auto cells = static_cast<long>(std::ceil(t / grid_step));
    const double h = t / static_cast<double>(cells);
    CpIntegrals out;
    LindbladRates prev = lindblad_rates(map, 0.0);
    for (long i = 1; i <= cells; ++i) {
        const double lo = h * static_cast<double>(i - 1);
        const double hi = i == cells ? t : h * static_cast<double>(i);
        const LindbladRates cur = lindblad_rates(map, hi);
        if (near_pole(lo, hi) || prev.pole_flag || cur.pole_flag) {
            if (!out.excluded.empty() && out.excluded.back().second == lo) out.excluded.back().second = hi;
            else out.excluded.emplace_back(lo, hi);
        } else {
            const double w = 0.5 * (hi - lo);
            out.int_dis += w * (prev.gamma_dis + cur.gamma_dis);
            out.int_abs += w * (prev.gamma_abs + cur.gamma_abs);
            out.int_deph += w * (prev.gamma_deph + cur.gamma_deph);
        }
        prev = cur;
    }
    return out;
}

} // namespace cspin
