#pragma once

#include "fieldlink/channel_algebra.hpp"

namespace fieldlink {

struct VacuumIntegrals {
    double r = 0.0; // oscillatory corner integral R(dE, L)
    double s = 0.0; // local integral S(dE)
    double t = 0.0; // cross integral T(dE, L)
    double error_estimate = 0.0;
};

struct AdiabaticBound {
    double max_switching_rate = 0.0; // bound on max_t |d eta/dt|
    bool infinite_volume = false;
};

/// Radial momentum integrals of the dressed two-detector ground state, with
/// Gaussian smearing |f(p)|^2 = exp(-p^2 dX^2).
VacuumIntegrals vacuum_integrals(double dE, double L, double dX, double m,
                                 const QuadraturePolicy& policy = {});

/// Perturbative reduced density matrix of the dressed ground state in the
/// basis (|ee>, |eg>, |ge>, |gg>), identical couplings alpha.
Matrix4 ground_state_reduced(double alpha, const VacuumIntegrals& vi);

/// N = 2 |sum of negative eigenvalues of the partial transpose over qubit 2|.
double negativity(const Matrix4& rho);

/// Short-distance closed form, per unit alpha^2:
/// (1/2 pi^2) max(pi/(2 L dE) - ln(1/(dE dX)), 0), or the mass-gap analogue.
enum class AsymptoticRegime { GapDominated, MassDominated };
double negativity_asymptotic(double dE, double L, double dX, double m, AsymptoticRegime regime);

/// Critical separation below which the dressed ground state is entangled.
double entanglement_threshold(double dE, double dX, double m);

/// Upper bound on the switching rate for the adiabatic treatment to hold,
/// infrared-regulated in a box of size l_ir (pass inf for unbounded volume).
AdiabaticBound adiabatic_bound(double m, double dE, double alpha, double l_ir);

/// Interaction-induced shift of the ground state energy relative to infinite
/// separation; negative (attractive). Conditionally convergent momentum
/// integrals are damped by exp(-eps(p1+p2)) and ladder-extrapolated.
double casimir_energy(double dE, double L, double alpha, const QuadraturePolicy& policy = {});

/// F = -d(casimir_energy)/dL by Richardson-refined central differences.
double casimir_force(double dE, double L, double alpha, const QuadraturePolicy& policy = {});

/// Bound on detector speed for the static treatment: (dE^{3/2}/alpha) 32 sqrt(2)/(3 sqrt(3)).
double speed_bound(double dE, double alpha);

} // namespace fieldlink
