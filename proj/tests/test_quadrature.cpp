#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fieldlink/correlators.hpp"
#include "fieldlink/quadrature.hpp"

using namespace fieldlink;
using std::numbers::pi;

TEST_CASE("adaptive rule reproduces closed forms") {
    QuadraturePolicy pol;
    pol.rel_tol = 1e-10;
    auto poly = [](double x) -> Complex { return {x * x * x - 2.0 * x + 1.0, 0.0}; };
    CHECK(integrate_1d(poly, 0.0, 2.0, pol).value.real() == doctest::Approx(2.0).epsilon(1e-12));

    auto expf = [](double x) -> Complex { return {std::exp(x), 0.0}; };
    CHECK(integrate_1d(expf, 0.0, 1.0, pol).value.real() ==
          doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));

    auto cplx = [](double x) -> Complex { return std::exp(Complex{0.0, x}); };
    const Complex v = integrate_1d(cplx, 0.0, pi / 2.0, pol).value;
    CHECK(v.real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(v.imag() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("oscillatory integrand handled via oscillation seeding") {
    QuadraturePolicy pol;
    pol.rel_tol = 1e-10;
    const double w = 73.0;
    auto f = [&](double x) -> Complex { return {std::cos(w * x), 0.0}; };
    const double exact = std::sin(w * 5.0) / w;
    CHECK(integrate_1d(f, 0.0, 5.0, pol, {}, w).value.real() ==
          doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("integrable endpoint singularity converges") {
    QuadraturePolicy pol;
    pol.rel_tol = 1e-8;
    auto f = [](double x) -> Complex { return {1.0 / std::sqrt(x), 0.0}; };
    CHECK(integrate_1d(f, 0.0, 1.0, pol).value.real() == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("split hints accelerate a near-pole integrand") {
    QuadraturePolicy pol;
    pol.rel_tol = 1e-9;
    const double eps = 1e-4;
    auto f = [&](double x) -> Complex {
        return {eps / ((x - 0.7) * (x - 0.7) + eps * eps), 0.0};
    };
    // Lorentzian: integral = atan((1-0.7)/eps) + atan(0.7/eps)
    const double exact = std::atan(0.3 / eps) + std::atan(0.7 / eps);
    const double hints[] = {0.7};
    auto r = integrate_1d(f, 0.0, 1.0, pol, hints);
    CHECK(r.value.real() == doctest::Approx(exact).epsilon(1e-8));
}

TEST_CASE("budget exhaustion on a divergent integrand raises") {
    QuadraturePolicy pol;
    pol.rel_tol = 1e-10;
    pol.max_subdivisions = 30;
    auto f = [](double x) -> Complex { return {1.0 / x, 0.0}; };
    CHECK_THROWS_AS((void)integrate_1d(f, 0.0, 1.0, pol), QuadratureError);
}

TEST_CASE("ordered simplex integration") {
    QuadraturePolicy pol;
    pol.rel_tol = 1e-9;
    SUBCASE("volume of the ordered k-simplex is (b-a)^k / k!") {
        for (int k = 1; k <= 4; ++k) {
            auto one = [](std::span<const double>) -> Complex { return {1.0, 0.0}; };
            const double vol = integrate_simplex(one, k, 0.0, 2.0, pol).value.real();
            double fact = 1.0;
            for (int i = 2; i <= k; ++i) fact *= i;
            CHECK(vol == doctest::Approx(std::pow(2.0, k) / fact).epsilon(1e-7));
        }
    }
    SUBCASE("symmetric integrand over the simplex equals square integral / k!") {
        auto f = [](std::span<const double> t) -> Complex {
            return {std::exp(t[0]) * std::exp(t[1]), 0.0};
        };
        const double square = std::pow(std::exp(1.0) - 1.0, 2);
        CHECK(integrate_simplex(f, 2, 0.0, 1.0, pol).value.real() ==
              doctest::Approx(square / 2.0).epsilon(1e-8));
    }
    SUBCASE("ordering is respected") {
        // integrand nonzero only when t[0] >= t[1]; indicator of the ordering
        auto f = [](std::span<const double> t) -> Complex {
            return {t[0] - t[1] >= 0.0 ? 1.0 : -1000.0, 0.0};
        };
        CHECK(integrate_simplex(f, 2, 0.0, 1.0, pol).value.real() ==
              doctest::Approx(0.5).epsilon(1e-8));
    }
}

TEST_CASE("ladder extrapolation recovers polynomial intercepts") {
    // synthetic: v(eps) = c0 + c1 eps + c2 eps^2 + c3 eps^3
    const Complex c0{0.7362718, -1.25}, c1{-3.1, 0.4}, c2{11.0, -2.0}, c3{-5.0, 9.0};
    std::vector<std::pair<double, Complex>> rungs;
    for (int k = 0; k < 8; ++k) {
        const double e = 0.1 * std::pow(0.5, k);
        rungs.emplace_back(e, c0 + c1 * e + c2 * e * e + c3 * e * e * e);
    }
    auto [v, resid] = extrapolate_ladder(rungs);
    CHECK(std::abs(v - c0) < 1e-10);
    CHECK(resid < 1e-9);
}

TEST_CASE("ladder extrapolation flags a diverging sequence") {
    std::vector<std::pair<double, Complex>> rungs;
    for (int k = 0; k < 6; ++k) {
        const double e = 0.1 * std::pow(0.5, k);
        rungs.emplace_back(e, Complex{1.0 / e, 0.0}); // no finite limit
    }
    CHECK_THROWS_AS((void)extrapolate_ladder(rungs), QuadratureError);
}

TEST_CASE("delta collapse reduces a two-time integrand to the pinned line") {
    const double L = 0.8;
    const auto support = commutator_distributional(L);
    auto smooth = [&](std::span<const double> t) -> Complex {
        return {std::sin(t[0]) * std::cos(t[1]), 0.0};
    };
    auto col = collapse_delta(smooth, support, 1, 0, 2, 0.0, 3.0);
    CHECK(!col.boundary_warning);
    // at t0 = 2.0 only the t1 = t0 - L locus survives (ordering t0 >= t1)
    const double t0 = 2.0;
    const double v[] = {t0};
    const Complex expect =
        support.loci[1].weight * std::sin(t0) * std::cos(t0 - L); // dt = -L locus
    const Complex got = col.f(std::span<const double>(v, 1));
    CHECK(std::abs(got - expect) < 1e-14);
    // locus outside the window contributes nothing
    const double v2[] = {0.5}; // t0 - L < 0
    CHECK(std::abs(col.f(std::span<const double>(v2, 1))) == 0.0);
}

TEST_CASE("delta collapse warns when a locus grazes the window boundary") {
    const auto support = commutator_distributional(3.0);
    auto one = [](std::span<const double>) -> Complex { return {1.0, 0.0}; };
    auto col = collapse_delta(one, support, 1, 0, 2, 0.0, 3.0);
    CHECK(col.boundary_warning);
}
