#pragma once

#include <array>
#include <complex>
#include <vector>

#include "fieldlink/quadrature.hpp"
#include "fieldlink/scenario.hpp"

namespace fieldlink {

/// i*eps prescription regulator with an extrapolation ladder towards eps = 0.
struct Regulator {
    double eps = 1e-3;

    static std::vector<double> ladder(const QuadraturePolicy& policy);
};

/// Delta-supported massless commutator at spatial separation r:
/// [phi(x), phi(y)] = (i/(4 pi r)) (delta(dt + r) - delta(dt - r)), dt = t_x - t_y.
struct CommutatorSupport {
    double r = 0.0;
    struct Locus {
        double dt;      // +r or -r
        Complex weight; // -i/(4 pi r) at +r, +i/(4 pi r) at -r
    };
    std::array<Locus, 2> loci;
};

/// Vacuum Wightman function <0|phi(x)phi(y)|0> at time difference dt and
/// spatial separation r, regulated at finite eps.
Complex wightman(double m, double dt, double r, const Regulator& reg,
                 const QuadraturePolicy& policy = {});

/// [phi(x), phi(y)] = W(dt) - W(-dt) at finite eps.
Complex commutator_eps(double m, double dt, double r, const Regulator& reg,
                       const QuadraturePolicy& policy = {});

CommutatorSupport commutator_distributional(double r);

/// Time-ordered two-point function (Feynman propagator), finite eps.
Complex feynman(double m, double dt, double r, const Regulator& reg,
                const QuadraturePolicy& policy = {});

/// <0|phi^+(x) phi^-(y)|0>; coincides with the Wightman function on the vacuum.
Complex positive_frequency(double m, double dt, double r, const Regulator& reg,
                           const QuadraturePolicy& policy = {});

} // namespace fieldlink
