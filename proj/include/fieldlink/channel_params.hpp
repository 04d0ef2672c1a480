#pragma once

#include <complex>
#include <string>

#include "fieldlink/correlators.hpp"
#include "fieldlink/quadrature.hpp"
#include "fieldlink/scenario.hpp"

namespace fieldlink {

struct PhysicsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConvergenceInfo {
    double error_estimate = 0.0;   // worst component quadrature estimate
    double ladder_residual = 0.0;  // worst eps-extrapolation residual
    long evaluations = 0;
    bool weak_coupling_warning = false; // a coupling exceeded 0.3
};

/// The five scalars of the second-order channel map, with provenance.
struct ChannelParams {
    double excitation_noise = 0.0; // P_e
    double gain_excited = 0.0;     // A
    double gain_ground = 0.0;      // B
    Complex coherence_direct{0.0, 0.0};    // C
    Complex coherence_counter{0.0, 0.0};   // D
    ConvergenceInfo convergence;

    /// Kraus radicand / population invariants; throws PhysicsError on violation.
    void validate() const;
};

double compute_Pe(const ScenarioSpec& spec);
/// Momentum-space route for Gaussian switching, massless field (closed-form
/// switching transform); used as the representation-equivalence cross check.
double compute_Pe_momentum_space(const ScenarioSpec& spec);

Complex compute_C(const ScenarioSpec& spec);
Complex compute_D(const ScenarioSpec& spec);
double compute_A(const ScenarioSpec& spec);
double compute_B(const ScenarioSpec& spec);
/// A evaluated at a caller-chosen gap sign (B's first piece is A(-dE)).
double compute_A_signed(const ScenarioSpec& spec, double gap);
/// Regulator-only route: every commutator kept at finite eps and removed by
/// the ladder, no delta collapse. The only available route for massive
/// fields, and the cross-check path for massless ones. Expensive.
double compute_A_signed_eps(const ScenarioSpec& spec, double gap);

ChannelParams compute_params(const ScenarioSpec& spec);

double fermi_probability(const ScenarioSpec& spec);
Complex glauber_leakage(const ScenarioSpec& spec);

} // namespace fieldlink
