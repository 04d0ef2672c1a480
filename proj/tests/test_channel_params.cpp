#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fieldlink/channel_params.hpp"

using namespace fieldlink;
using std::numbers::pi;

namespace {

ScenarioSpec timelike_ref() {
    ScenarioSpec s;
    s.detector1.coupling = s.detector2.coupling = 0.1;
    s.detector2.position = {0.0, 0.0, 1.0};
    s.energy_gap = 1.0;
    s.switching.t_start = 0.0;
    s.switching.t_end = 4.0;
    return s;
}

ScenarioSpec spacelike_ref() {
    ScenarioSpec s = timelike_ref();
    s.switching.t_end = 0.8;
    return s;
}

// independent route for the direct coherence: both correlators kept at
// finite eps, ordered double integral, ladder to eps -> 0
Complex coherence_eps_oracle(const ScenarioSpec& spec, bool counter) {
    const double L = spec.separation();
    const double g = spec.energy_gap;
    const double lo = spec.switching.t_start, hi = spec.switching.t_end;
    std::vector<std::pair<double, Complex>> rungs;
    const auto ladder = Regulator::ladder(spec.quadrature);
    for (double eps : ladder) {
        Regulator reg{eps};
        auto outer = [&](double t1) -> Complex {
            auto inner = [&](double t2) -> Complex {
                const double phase = counter ? g * (t2 + t1) : g * (t2 - t1);
                return eval_switching(spec.switching, t2) *
                       std::exp(Complex{0.0, phase}) * commutator_eps(0.0, t2 - t1, L, reg);
            };
            const double hints[] = {t1 - L};
            QuadraturePolicy ip = spec.quadrature;
            ip.abs_floor *= 1e-2;
            return eval_switching(spec.switching, t1) *
                   integrate_1d(inner, lo, t1, ip, hints, 2.0 * g).value;
        };
        rungs.emplace_back(eps, integrate_1d(outer, lo, hi, spec.quadrature, {}, 2.0 * g).value);
    }
    auto [v, resid] = extrapolate_ladder(rungs);
    const double sign = counter ? -1.0 : 1.0;
    return sign * spec.detector1.coupling * spec.detector2.coupling * v;
}

} // namespace

TEST_CASE("excitation noise: representation equivalence for gaussian switching") {
    ScenarioSpec s = timelike_ref();
    s.detector1.coupling = 0.0;
    s.switching.kind = SwitchingKind::Gaussian;
    s.switching.t_start = -4.0;
    s.switching.t_end = 4.0;
    s.switching.width = 1.0;
    const double td = compute_Pe(s);
    const double ms = compute_Pe_momentum_space(s);
    CHECK(std::abs(td - ms) < 1e-6 * ms);
    // closed form for this window: alpha^2 * 0.0070882722326 (complementary
    // error function reduction of the momentum integral)
    CHECK(ms == doctest::Approx(0.01 * 0.0070882722326).epsilon(1e-8));
}

TEST_CASE("momentum-space route rejects unsupported scenarios") {
    ScenarioSpec s = timelike_ref(); // bump switching
    CHECK_THROWS_AS((void)compute_Pe_momentum_space(s), PhysicsError);
    s.switching.kind = SwitchingKind::Gaussian;
    s.field.mass = 1.0;
    CHECK_THROWS_AS((void)compute_Pe_momentum_space(s), PhysicsError);
}

TEST_CASE("spacelike scenarios: gains and coherences vanish identically") {
    const ScenarioSpec s = spacelike_ref();
    CHECK(compute_A(s) == 0.0);
    CHECK(compute_B(s) == 0.0);
    CHECK(std::abs(compute_C(s)) == 0.0);
    CHECK(std::abs(compute_D(s)) == 0.0);
    CHECK(compute_Pe(s) == doctest::Approx(7.70710782056e-4).epsilon(1e-5));
    CHECK(compute_Pe(s) > 0.0);
}

TEST_CASE("timelike reference scenario regression") {
    const ScenarioSpec s = timelike_ref();
    const ChannelParams p = compute_params(s);
    CHECK(p.excitation_noise == doctest::Approx(1.57120578717e-4).epsilon(1e-6));
    CHECK(p.gain_excited == doctest::Approx(1.0957120e-6).epsilon(1e-4));
    CHECK(p.gain_ground == doctest::Approx(4.8334971e-7).epsilon(1e-4));
    CHECK(p.coherence_direct.real() == doctest::Approx(9.37529271636e-4).epsilon(1e-6));
    CHECK(p.coherence_direct.imag() == doctest::Approx(6.01980622540e-4).epsilon(1e-6));
    CHECK(p.coherence_counter.real() == doctest::Approx(-4.39805755164e-4).epsilon(1e-6));
    CHECK(p.coherence_counter.imag() == doctest::Approx(3.79856340412e-4).epsilon(1e-6));
    CHECK(p.convergence.error_estimate < 1e-6);
    CHECK(!p.convergence.weak_coupling_warning);
}

TEST_CASE("coherences: delta collapse agrees with the regulator-only route") {
    ScenarioSpec s = timelike_ref();
    s.switching.t_end = 3.0;
    const Complex c_fast = compute_C(s);
    const Complex c_eps = coherence_eps_oracle(s, false);
    CHECK(std::abs(c_fast - c_eps) < 1e-4 * std::abs(c_fast));
    const Complex d_fast = compute_D(s);
    const Complex d_eps = coherence_eps_oracle(s, true);
    CHECK(std::abs(d_fast - d_eps) < 1e-4 * std::abs(d_fast));
}

TEST_CASE("zero couplings give the trivial channel") {
    ScenarioSpec s = timelike_ref();
    s.detector1.coupling = 0.0;
    s.detector2.coupling = 0.0;
    const ChannelParams p = compute_params(s);
    CHECK(p.excitation_noise == 0.0);
    CHECK(p.gain_excited == 0.0);
    CHECK(p.gain_ground == 0.0);
    CHECK(std::abs(p.coherence_direct) == 0.0);
    CHECK(std::abs(p.coherence_counter) == 0.0);
}

TEST_CASE("parameter validation catches nonphysical sets") {
    ChannelParams p;
    p.excitation_noise = -0.1;
    CHECK_THROWS_AS(p.validate(), PhysicsError);
    p = ChannelParams{};
    p.excitation_noise = 0.6;
    p.gain_excited = 0.6; // P_e + A > 1
    CHECK_THROWS_AS(p.validate(), PhysicsError);
    p = ChannelParams{};
    p.excitation_noise = 0.01;
    p.coherence_direct = {0.5, 0.0}; // |C|^2 > (P_e+A)(1-P_e-B)
    CHECK_THROWS_AS(p.validate(), PhysicsError);
}

TEST_CASE("strong coupling sets the warning flag") {
    ScenarioSpec s = spacelike_ref();
    s.detector1.coupling = s.detector2.coupling = 0.35;
    const ChannelParams p = compute_params(s);
    CHECK(p.convergence.weak_coupling_warning);
}

TEST_CASE("apparent leakage vs true coherence at spacelike separation") {
    const ScenarioSpec s = spacelike_ref();
    const Complex g = glauber_leakage(s);
    CHECK(std::abs(g) == doctest::Approx(3.09631359609e-5).epsilon(1e-4));
    CHECK(std::abs(g) > 1e-6 * s.detector1.coupling * s.detector2.coupling);
    CHECK(std::abs(compute_C(s)) == 0.0);
    const double f = fermi_probability(s);
    CHECK(f > 0.0);
}

TEST_CASE("massive excitation noise matches a momentum-space oracle") {
    ScenarioSpec s = timelike_ref();
    s.detector1.coupling = 0.0;
    s.field.mass = 1.3;
    s.switching.kind = SwitchingKind::Gaussian;
    s.switching.t_start = -4.0;
    s.switching.t_end = 4.0;
    s.switching.width = 1.0;
    const double got = compute_Pe(s);
    // P_e = alpha^2/(4 pi^2) int p^2/E |eta_hat(E + dE)|^2 dp with the
    // gaussian transform |eta_hat(w)|^2 = 2 pi sigma^2 exp(-w^2 sigma^2)
    const double m = s.field.mass, gap = s.energy_gap, sig = s.switching.width;
    const int n = 2'000'000;
    const double pmax = 30.0, h = pmax / n;
    double acc = 0.0;
    for (int i = 1; i < n; ++i) {
        const double p = i * h;
        const double e = std::sqrt(p * p + m * m);
        const double w = e + gap;
        acc += p * p / e * 2.0 * pi * sig * sig * std::exp(-w * w * sig * sig);
    }
    const double oracle = 0.01 * acc * h / (4.0 * pi * pi);
    CHECK(got == doctest::Approx(oracle).epsilon(1e-4));
}

TEST_CASE("massive coherence approaches the massless one for tiny mass") {
    ScenarioSpec s = timelike_ref();
    s.switching.t_end = 3.0;
    const Complex c0 = compute_C(s);
    s.field.mass = 1e-4;
    s.quadrature.rel_tol = 1e-5;
    const Complex cm = compute_C(s);
    CHECK(std::abs(cm - c0) < 1e-2 * std::abs(c0));
}
