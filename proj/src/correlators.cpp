#include "fieldlink/correlators.hpp"

#include <cmath>
#include <numbers>

namespace fieldlink {

namespace {
constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};
} // namespace

std::vector<double> Regulator::ladder(const QuadraturePolicy& policy) {
    std::vector<double> eps(static_cast<size_t>(policy.eps_rungs));
    double e = policy.eps_start;
    for (auto& v : eps) {
        v = e;
        e *= 0.5;
    }
    return eps;
}

Complex wightman(double m, double dt, double r, const Regulator& reg,
                 const QuadraturePolicy& policy) {
    if (r < 0.0) throw std::invalid_argument("wightman: r must be >= 0");
    const double eps = reg.eps;
    if (m == 0.0) {
        const Complex z = Complex{dt, -eps};
        return -1.0 / (4.0 * kPi * kPi * (z * z - r * r));
    }
    // massive mode integral, damped by e^{-eps E_p}; the relativistic tail
    // beyond p_max is appended analytically with E_p ~ p
    const double r_floor = 1e-8 * std::max({1.0, std::abs(dt), 1.0 / m});
    const Complex z{eps, dt};
    const double scale = std::max({r, std::abs(dt), eps, 1e-2});
    const double p_max = std::min(60.0 / eps, std::max(200.0 * m, 60.0 / scale));
    QuadraturePolicy local = policy;
    local.max_subdivisions = std::max(policy.max_subdivisions, 4000);
    if (r <= r_floor) {
        auto f = [&](double p) -> Complex {
            const double ep = std::sqrt(p * p + m * m);
            return p * p / ep * std::exp(-z * ep);
        };
        const double omega = std::abs(dt);
        Complex core = integrate_1d(f, 0.0, p_max, local, {}, omega).value;
        const Complex tail = std::exp(-z * p_max) * (p_max / z + 1.0 / (z * z));
        return (core + tail) / (4.0 * kPi * kPi);
    }
    auto f = [&](double p) -> Complex {
        const double ep = std::sqrt(p * p + m * m);
        return p * std::sin(p * r) / ep * std::exp(-z * ep);
    };
    const double omega = std::abs(dt) + r;
    Complex core = integrate_1d(f, 0.0, p_max, local, {}, omega).value;
    const Complex zm{eps, dt - r}, zp{eps, dt + r};
    const Complex tail =
        (std::exp(-zm * p_max) / zm - std::exp(-zp * p_max) / zp) / Complex{0.0, 2.0};
    return (core + tail) / (4.0 * kPi * kPi * r);
}

Complex commutator_eps(double m, double dt, double r, const Regulator& reg,
                       const QuadraturePolicy& policy) {
    if (dt == 0.0) return {0.0, 0.0}; // antisymmetry, exactly
    const Complex w_plus = wightman(m, dt, r, reg, policy);
    // W(-dt, eps) = conj(W(dt, eps)): holds for the closed form and the mode integral
    return w_plus - std::conj(w_plus);
}

CommutatorSupport commutator_distributional(double r) {
    if (!(r > 0.0))
        throw std::invalid_argument("commutator_distributional: r must be > 0");
    const double w = 1.0 / (4.0 * kPi * r);
    CommutatorSupport s;
    s.r = r;
    s.loci[0] = {+r, -kI * w};
    s.loci[1] = {-r, +kI * w};
    return s;
}

Complex feynman(double m, double dt, double r, const Regulator& reg,
                const QuadraturePolicy& policy) {
    return wightman(m, std::abs(dt), r, reg, policy);
}

Complex positive_frequency(double m, double dt, double r, const Regulator& reg,
                           const QuadraturePolicy& policy) {
    return wightman(m, dt, r, reg, policy);
}

} // namespace fieldlink
