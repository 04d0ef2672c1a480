#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fieldlink/channel_algebra.hpp"

using namespace fieldlink;

namespace {

std::mt19937 rng(12345);

Matrix2 random_density() {
    // random pure-state mixture: psd, trace one
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double x, y, z;
    do {
        x = u(rng);
        y = u(rng);
        z = u(rng);
    } while (x * x + y * y + z * z > 1.0);
    return density_from_bloch(x, y, z);
}

ChannelParams random_valid_params() {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ChannelParams p;
    p.excitation_noise = 0.02 * u(rng);
    p.gain_excited = 0.1 * u(rng);
    p.gain_ground = 0.1 * u(rng);
    // keep the radicands comfortably positive
    const double cmax = std::sqrt((p.excitation_noise + p.gain_excited) *
                                  (1.0 - p.excitation_noise - p.gain_ground));
    const double dmax = std::sqrt((p.excitation_noise + p.gain_ground) *
                                  (1.0 - p.excitation_noise - p.gain_excited));
    std::uniform_real_distribution<double> ph(0.0, 2.0 * 3.14159265358979);
    p.coherence_direct = 0.7 * cmax * std::exp(Complex{0.0, ph(rng)});
    p.coherence_counter = 0.7 * dmax * std::exp(Complex{0.0, ph(rng)});
    p.validate();
    return p;
}

double frob_diff(const Matrix2& a, const Matrix2& b) {
    double s = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            s += std::norm(a[static_cast<size_t>(i)][static_cast<size_t>(j)] -
                           b[static_cast<size_t>(i)][static_cast<size_t>(j)]);
    return std::sqrt(s);
}

} // namespace

TEST_CASE("constant map limits") {
    ChannelParams zero;
    const Matrix2 out = apply_channel(zero, random_density());
    CHECK(std::abs(out[0][0]) < 1e-15);
    CHECK(std::abs(out[1][1] - 1.0) < 1e-15);
    CHECK(std::abs(out[0][1]) < 1e-15);

    ChannelParams noise;
    noise.excitation_noise = 0.3;
    const Matrix2 out2 = apply_channel(noise, random_density());
    CHECK(out2[0][0].real() == doctest::Approx(0.3));
    CHECK(out2[1][1].real() == doctest::Approx(0.7));
}

TEST_CASE("excited input populates P_e + A") {
    ChannelParams p = random_valid_params();
    const Matrix2 rho = density_from_bloch(0.0, 0.0, 1.0); // |e><e|
    const Matrix2 out = apply_channel(p, rho);
    CHECK(out[0][0].real() ==
          doctest::Approx(p.excitation_noise + p.gain_excited).epsilon(1e-12));
    CHECK(std::abs(out[0][1]) < 1e-15); // diagonal in, diagonal out
}

TEST_CASE("channel is linear, trace preserving, hermiticity preserving") {
    ChannelParams p = random_valid_params();
    const Matrix2 r1 = random_density(), r2 = random_density();
    const double a = 0.37;
    Matrix2 mix;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            mix[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                a * r1[static_cast<size_t>(i)][static_cast<size_t>(j)] +
                (1.0 - a) * r2[static_cast<size_t>(i)][static_cast<size_t>(j)];
    const Matrix2 lhs = apply_channel(p, mix);
    const Matrix2 o1 = apply_channel(p, r1), o2 = apply_channel(p, r2);
    Matrix2 rhs;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            rhs[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                a * o1[static_cast<size_t>(i)][static_cast<size_t>(j)] +
                (1.0 - a) * o2[static_cast<size_t>(i)][static_cast<size_t>(j)];
    CHECK(frob_diff(lhs, rhs) < 1e-12);
    CHECK(trace_real(lhs) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(lhs[0][1] - std::conj(lhs[1][0])) < 1e-14);
}

TEST_CASE("kraus completeness and map equivalence on random inputs") {
    for (int trial = 0; trial < 100; ++trial) {
        const ChannelParams p = random_valid_params();
        const auto ks = kraus_set(p);
        REQUIRE(ks.size() == 4);
        // completeness sum E^dag E = I
        Matrix2 sum{};
        for (const auto& e : ks)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    for (int k = 0; k < 2; ++k)
                        sum[static_cast<size_t>(i)][static_cast<size_t>(j)] +=
                            std::conj(e[static_cast<size_t>(k)][static_cast<size_t>(i)]) *
                            e[static_cast<size_t>(k)][static_cast<size_t>(j)];
        CHECK(std::abs(sum[0][0] - 1.0) < 1e-12);
        CHECK(std::abs(sum[1][1] - 1.0) < 1e-12);
        CHECK(std::abs(sum[0][1]) < 1e-12);
        const Matrix2 rho = random_density();
        CHECK(frob_diff(apply_kraus(ks, rho), apply_channel(p, rho)) < 1e-12);
    }
}

TEST_CASE("zero-parameter kraus set degenerates to the constant map") {
    ChannelParams zero;
    const auto ks = kraus_set(zero);
    // E3 carries the whole map: lower-left entry one
    CHECK(std::abs(ks[2][1][0] - 1.0) < 1e-15);
    CHECK(std::abs(ks[0][0][0]) < 1e-15);
    const Matrix2 out = apply_kraus(ks, random_density());
    CHECK(std::abs(out[1][1] - 1.0) < 1e-14);
}

TEST_CASE("kraus set rejects invalid radicands") {
    ChannelParams p;
    p.excitation_noise = 0.01;
    p.coherence_direct = {0.15, 0.0}; // |C|^2 > (P_e+A)(1-P_e-B)
    CHECK_THROWS_AS((void)kraus_set(p), PhysicsError);
}

TEST_CASE("choi matrix: rank and positivity") {
    ChannelParams zero;
    CHECK(choi_rank(zero) == 2);
    // the two nonzero eigenvalues of the constant map's choi are 1/2 each
    auto ev = hermitian_eigenvalues(choi_matrix(zero));
    CHECK(ev[3] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ev[2] == doctest::Approx(0.5).epsilon(1e-12));

    for (int trial = 0; trial < 20; ++trial) {
        const ChannelParams p = random_valid_params();
        const auto j = choi_matrix(p);
        CHECK(trace_real(j) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(hermitian_eigenvalues(j)[0] > -1e-10);
        CHECK(choi_rank(p) == 4);
    }
}

TEST_CASE("choi matrix exposes radicand violations as negativity") {
    ChannelParams p;
    p.excitation_noise = 0.01;
    p.coherence_direct = {0.5, 0.0}; // strongly violates complete positivity
    CHECK(hermitian_eigenvalues(choi_matrix(p))[0] < -1e-3);
}

TEST_CASE("complementary channel outputs are states") {
    for (int trial = 0; trial < 100; ++trial) {
        const ChannelParams p = random_valid_params();
        const Matrix4 env = complementary_apply(p, random_density());
        CHECK(trace_real(env) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(hermitian_eigenvalues(env)[0] > -1e-12);
    }
    // constant map on a pure input: the joint output factorizes, so the
    // environment output is pure too
    ChannelParams zero;
    const Matrix4 env = complementary_apply(zero, density_from_bloch(0.6, 0.0, 0.8));
    auto ev = hermitian_eigenvalues(env);
    CHECK(ev[3] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(ev[2]) < 1e-12);
}
