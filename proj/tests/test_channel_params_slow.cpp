#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fieldlink/channel_params.hpp"

using namespace fieldlink;

// Cross-validation of the collapsed third-order blocks against the
// regulator-only route, which shares no reduction step with them. Budgeted
// coarse: the regulator route is a 4D nested quadrature per ladder rung.

TEST_CASE("excited gain: delta collapse agrees with the regulator-only route") {
    ScenarioSpec s;
    s.detector1.coupling = s.detector2.coupling = 0.1;
    s.detector2.position = {0.0, 0.0, 1.0};
    s.energy_gap = 1.0;
    s.switching.t_start = 0.0;
    s.switching.t_end = 1.6;
    s.quadrature.rel_tol = 1e-3;
    s.quadrature.abs_floor = 1e-13;
    s.quadrature.eps_rungs = 5;

    const double a_col = compute_A_signed(s, s.energy_gap);
    const double a_eps = compute_A_signed_eps(s, s.energy_gap);
    CHECK(a_col != 0.0);
    CHECK(std::abs(a_eps - a_col) < 5e-3 * std::abs(a_col));
}

TEST_CASE("massive gains are finite and mass-continuous") {
    ScenarioSpec s;
    s.detector1.coupling = s.detector2.coupling = 0.1;
    s.detector2.position = {0.0, 0.0, 1.0};
    s.energy_gap = 1.0;
    s.switching.t_start = 0.0;
    s.switching.t_end = 1.6;
    s.quadrature.rel_tol = 3e-3;
    s.quadrature.abs_floor = 1e-12;
    s.quadrature.eps_rungs = 4;

    const double a0 = compute_A_signed_eps(s, s.energy_gap);
    s.field.mass = 1e-3;
    const double am = compute_A(s); // routes through the regulator-only path
    CHECK(std::isfinite(am));
    CHECK(std::abs(am - a0) < 1e-2 * std::abs(a0));
}
