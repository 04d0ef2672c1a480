#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fieldlink/capacity.hpp"

using namespace fieldlink;

namespace {

ChannelParams make_pab(double pe, double a, double b) {
    ChannelParams p;
    p.excitation_noise = pe;
    p.gain_excited = a;
    p.gain_ground = b;
    return p;
}

double h2_bits(double x) { return binary_entropy(x) / std::numbers::ln2; }

double bracket_bits(const ChannelParams& p, double p1) {
    const double pe = p.excitation_noise, a = p.gain_excited, b = p.gain_ground;
    return h2_bits(pe + b + p1 * (a - b)) - p1 * h2_bits(pe + a) - (1.0 - p1) * h2_bits(pe + b);
}

} // namespace

TEST_CASE("binary entropy values and boundary convention") {
    CHECK(binary_entropy(0.5) == doctest::Approx(std::numbers::ln2).epsilon(1e-12));
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(binary_entropy(0.1) == doctest::Approx(0.3250829733914482).epsilon(1e-12));
    CHECK_THROWS_AS((void)binary_entropy(-0.1), std::domain_error);
    CHECK_THROWS_AS((void)binary_entropy(1.1), std::domain_error);
}

TEST_CASE("noiseless and symmetric channels") {
    auto r = classical_capacity(make_pab(0.0, 1.0, 0.0));
    CHECK(r.capacity_bits == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.optimal_prior == doctest::Approx(0.5).epsilon(1e-6));

    // flip probability 0.1 symmetric channel
    auto bsc = classical_capacity(make_pab(0.0, 0.9, 0.1));
    CHECK(bsc.capacity_bits == doctest::Approx(1.0 - h2_bits(0.1)).epsilon(1e-6));
    CHECK(bsc.optimal_prior == doctest::Approx(0.5).epsilon(1e-5));

    auto degen = classical_capacity(make_pab(0.05, 0.2, 0.2));
    CHECK(degen.degenerate);
    CHECK(degen.capacity_bits == 0.0);
}

TEST_CASE("unit discipline and rate scaling") {
    auto r = classical_capacity(make_pab(0.0, 0.9, 0.1), 4.0);
    CHECK(r.capacity_bits == doctest::Approx(r.capacity_nats / std::numbers::ln2).epsilon(1e-14));
    CHECK(r.rate_bits_per_time == doctest::Approx(r.capacity_bits / 4.0).epsilon(1e-14));
}

TEST_CASE("optimizer beats a fine grid on random channels") {
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double pe = 0.05 * u(rng);
        double a = 0.8 * u(rng), b = 0.8 * u(rng);
        if (std::abs(a - b) < 1e-3) a += 0.01;
        const ChannelParams p = make_pab(pe, a, b);
        const auto r = classical_capacity(p);
        double grid_best = 0.0;
        for (int i = 0; i <= 1000; ++i)
            grid_best = std::max(grid_best, bracket_bits(p, i / 1000.0));
        CHECK(r.capacity_bits >= grid_best - 1e-10);
        // concavity of the bracket on the grid (second differences <= 0)
        for (int i = 1; i < 1000; i += 97) {
            const double d2 = bracket_bits(p, (i + 1) / 1000.0) -
                              2.0 * bracket_bits(p, i / 1000.0) +
                              bracket_bits(p, (i - 1) / 1000.0);
            CHECK(d2 <= 1e-8);
        }
    }
}

TEST_CASE("closed-form prior matches the optimizer") {
    CHECK(closed_form_prior(make_pab(0.0, 0.9, 0.1)) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(closed_form_prior(make_pab(0.0, 1.0, 0.0)) == doctest::Approx(0.5).epsilon(1e-8));
    // asymmetric (Z-like) channel
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const ChannelParams p = make_pab(0.03 * u(rng), 0.2 + 0.6 * u(rng), 0.15 * u(rng));
        const auto r = classical_capacity(p);
        CHECK(closed_form_prior(p) == doctest::Approx(r.optimal_prior).epsilon(1e-5));
    }
    CHECK_THROWS_AS((void)closed_form_prior(make_pab(0.1, 0.3, 0.3)), std::domain_error);
}

TEST_CASE("coherent information limits") {
    ChannelParams zero;
    const auto r0 = coherent_information_single_use(zero);
    CHECK(std::abs(r0.value) < 1e-8);

    // spacelike-derived structure: A = B = C = D = 0, P_e > 0; channel output
    // carries no input dependence, so the coherent information cannot be
    // positive (anti-degradable regime)
    ChannelParams sp;
    sp.excitation_noise = 0.01;
    const auto rs = coherent_information_single_use(sp);
    CHECK(rs.value <= 1e-9);
    CHECK(rs.value_clamped >= 0.0);

    // determinism given the seed
    ChannelParams p;
    p.excitation_noise = 0.002;
    p.gain_excited = 0.3;
    p.gain_ground = 0.01;
    p.coherence_direct = {0.2, 0.1};
    const auto a = coherent_information_single_use(p, 99, 8);
    const auto b = coherent_information_single_use(p, 99, 8);
    CHECK(a.value == b.value);
}
