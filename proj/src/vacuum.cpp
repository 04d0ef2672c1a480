#include "fieldlink/vacuum.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace fieldlink {

namespace {

constexpr double kPi = std::numbers::pi;

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

double real_integral(const std::function<double(double)>& f, double a, double b,
                     const QuadraturePolicy& pol, double omega = 0.0) {
    auto g = [&](double x) -> Complex { return {f(x), 0.0}; };
    return integrate_1d(g, a, b, pol, {}, omega).value.real();
}

} // namespace

VacuumIntegrals vacuum_integrals(double dE, double L, double dX, double m,
                                 const QuadraturePolicy& policy) {
    if (dE <= 0.0 || L <= 0.0 || dX <= 0.0)
        throw std::domain_error("vacuum_integrals: dE, L, dX must be positive");
    const double p_max = std::max(20.0 / dX, 50.0 * std::max({dE, m, 1.0 / L}));
    auto ep = [&](double p) { return std::sqrt(p * p + m * m); };
    const double pref = 1.0 / (2.0 * kPi * kPi);

    QuadraturePolicy pol = policy;
    pol.rel_tol = std::min(policy.rel_tol, 1e-8);

    VacuumIntegrals vi;
    auto base = [&](double p) { return pref * p * p * std::exp(-p * p * dX * dX) / (2.0 * ep(p)); };
    vi.r = real_integral(
        [&](double p) { return base(p) * sinc(p * L) / ((ep(p) + dE) * dE); }, 0.0, p_max, pol, L);
    vi.s = real_integral([&](double p) { return base(p) / ((ep(p) + dE) * (ep(p) + dE)); }, 0.0,
                         p_max, pol);
    vi.t = real_integral(
        [&](double p) { return base(p) * sinc(p * L) / ((ep(p) + dE) * (ep(p) + dE)); }, 0.0,
        p_max, pol, L);
    vi.error_estimate = pol.rel_tol * (std::abs(vi.r) + vi.s + std::abs(vi.t));
    return vi;
}

Matrix4 ground_state_reduced(double alpha, const VacuumIntegrals& vi) {
    const double a2 = alpha * alpha;
    Matrix4 rho{};
    rho[0][0] = 0.0;
    rho[0][3] = a2 * vi.r;
    rho[3][0] = a2 * vi.r;
    rho[1][1] = a2 * vi.s;
    rho[2][2] = a2 * vi.s;
    rho[1][2] = a2 * vi.t;
    rho[2][1] = a2 * vi.t;
    rho[3][3] = 1.0 - 2.0 * a2 * vi.s;
    // the truncation drops O(alpha^4) populations, so tiny negative
    // eigenvalues of that order are expected; reject only when the leading
    // corrections stop being small
    if (a2 * (std::abs(vi.r) + vi.s + std::abs(vi.t)) > 0.1 || rho[3][3].real() <= 0.0)
        throw PhysicsError("perturbative state invalid at this alpha");
    return rho;
}

double negativity(const Matrix4& rho) {
    // partial transpose over qubit 2: (ab),(cd) -> (ad),(cb)
    Matrix4 pt{};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d)
                    pt[static_cast<size_t>(2 * a + b)][static_cast<size_t>(2 * c + d)] =
                        rho[static_cast<size_t>(2 * a + d)][static_cast<size_t>(2 * c + b)];
    auto ev = hermitian_eigenvalues(pt);
    double neg = 0.0;
    for (double l : ev)
        if (l < 0.0) neg += -l;
    return 2.0 * neg;
}

double negativity_asymptotic(double dE, double L, double dX, double m, AsymptoticRegime regime) {
    const double scale = regime == AsymptoticRegime::GapDominated ? dE : m;
    const double arg = kPi / (2.0 * L * dE) - std::log(1.0 / (scale * dX));
    return std::max(arg, 0.0) / (2.0 * kPi * kPi);
}

double entanglement_threshold(double dE, double dX, double m) {
    const double scale = m > dE ? m : dE;
    const double lg = std::log(1.0 / (scale * dX));
    if (lg <= 0.0) throw std::domain_error("threshold formula outside validity");
    return kPi / (2.0 * dE * lg);
}

AdiabaticBound adiabatic_bound(double m, double dE, double alpha, double l_ir) {
    if (alpha <= 0.0) throw std::domain_error("adiabatic_bound: alpha must be positive");
    AdiabaticBound out;
    if (!std::isfinite(l_ir)) {
        out.infinite_volume = true;
        if (m == 0.0) {
            out.max_switching_rate = 0.0;
            return out;
        }
    }
    const double k2 = out.infinite_volume ? 0.0 : 3.0 * std::pow(2.0 * kPi / l_ir, 2);
    const double w = std::sqrt(m * m + k2);
    out.max_switching_rate = std::pow(m * m + k2, 0.25) / alpha * std::pow(w + dE, 2);
    return out;
}

namespace {

// damped 1D oscillatory corner integral: int_0^inf sin(x) e^{-eps x}/(x + a) dx
double corner_integral(double a, double eps, const QuadraturePolicy& pol) {
    const double x_max = 25.0 / eps + 50.0;
    return real_integral([&](double x) { return std::sin(x) * std::exp(-eps * x) / (x + a); },
                         0.0, x_max, pol, 1.0);
}

// damped 2D iterated integral of sin(x1) sin(x2) g(x1, x2)
double damped_2d(const std::function<double(double, double)>& g, double eps,
                 const QuadraturePolicy& pol) {
    const double x_max = 25.0 / eps + 50.0;
    QuadraturePolicy inner = pol;
    inner.abs_floor = pol.abs_floor * 1e-2;
    inner.max_subdivisions = 4000;
    QuadraturePolicy outer = pol;
    outer.max_subdivisions = 4000;
    auto fo = [&](double x1) -> Complex {
        auto fi = [&](double x2) -> Complex {
            return Complex{std::sin(x2) * std::exp(-eps * x2) * g(x1, x2), 0.0};
        };
        const double v = integrate_1d(fi, 0.0, x_max, inner, {}, 1.0).value.real();
        return Complex{std::sin(x1) * std::exp(-eps * x1) * v, 0.0};
    };
    return integrate_1d(fo, 0.0, x_max, outer, {}, 1.0).value.real();
}

} // namespace

double casimir_energy(double dE, double L, double alpha, const QuadraturePolicy& policy) {
    if (L <= 0.0 || dE <= 0.0) throw std::domain_error("casimir_energy: dE, L must be positive");
    if (alpha == 0.0) return 0.0;
    const double a = L * dE;
    QuadraturePolicy pol = policy;
    pol.rel_tol = std::min(policy.rel_tol, 1e-7);

    // scale-free ladder in the damping parameter of the dimensionless integrals
    std::vector<double> eps_ladder;
    for (double e = 0.4; eps_ladder.size() < 5; e *= 0.5) eps_ladder.push_back(e);

    auto total_at_eps = [&](double eps) -> Complex {
        const double i1 = corner_integral(a, eps, pol);
        const double t1 = std::pow(i1 / (4.0 * kPi * kPi * L), 2) / dE;
        const double c2 = 1.0 / (16.0 * std::pow(kPi, 4) * L);
        const double t2 = c2 * damped_2d(
                                   [&](double x1, double x2) {
                                       const double s = 1.0 / (x1 + a) + 1.0 / (x2 + a);
                                       return s * s / (x1 + x2);
                                   },
                                   eps, pol);
        const double t3 = c2 * damped_2d(
                                   [&](double x1, double x2) {
                                       return 1.0 / ((x1 + x2 + 2.0 * a) * (x1 + a) * (x2 + a));
                                   },
                                   eps, pol);
        const double t4 = c2 * damped_2d(
                                   [&](double x1, double x2) {
                                       const double s = 1.0 / ((x1 + a) * (x1 + a)) +
                                                        1.0 / ((x2 + a) * (x2 + a));
                                       return s / (x1 + x2 + 2.0 * a);
                                   },
                                   eps, pol);
        return Complex{t1 + t2 + 2.0 * t3 + t4, 0.0};
    };

    std::vector<std::pair<double, Complex>> rungs;
    for (double e : eps_ladder) rungs.emplace_back(e, total_at_eps(e));
    auto [val, resid] = extrapolate_ladder(rungs);
    return -2.0 * std::pow(alpha, 4) * val.real();
}

double casimir_force(double dE, double L, double alpha, const QuadraturePolicy& policy) {
    const double h = 1e-3 * L;
    // five-point Richardson-refined central difference
    const double d1 = (casimir_energy(dE, L + h, alpha, policy) -
                       casimir_energy(dE, L - h, alpha, policy)) /
                      (2.0 * h);
    const double d2 = (casimir_energy(dE, L + 2.0 * h, alpha, policy) -
                       casimir_energy(dE, L - 2.0 * h, alpha, policy)) /
                      (4.0 * h);
    return -(4.0 * d1 - d2) / 3.0;
}

double speed_bound(double dE, double alpha) {
    if (alpha <= 0.0) throw std::domain_error("speed_bound: alpha must be positive");
    return std::pow(dE, 1.5) / alpha * 32.0 * std::sqrt(2.0) / (3.0 * std::sqrt(3.0));
}

} // namespace fieldlink
