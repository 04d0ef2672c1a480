#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

namespace fieldlink {

struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Scalar field parameters (natural units, hbar = c = 1).
struct FieldSpec {
    double mass = 0.0;

    void validate() const;
};

/// A static two-level detector at a fixed spatial position.
struct DetectorSpec {
    std::array<double, 3> position{0.0, 0.0, 0.0};
    double coupling = 0.0;                  // alpha_j >= 0
    std::optional<double> smearing_width;   // Gaussian width; empty = pointlike

    void validate() const;
};

enum class SwitchingKind {
    SmoothBump,      // C-infinity bump, exactly zero outside [t_start, t_end]
    Gaussian,        // non-compact; closed-form oracles only
    SmoothedTophat,  // compact, flat top with smooth shoulders
};

/// Temporal switching profile eta(t), normalized to peak value 1.
struct SwitchingSpec {
    SwitchingKind kind = SwitchingKind::SmoothBump;
    double t_start = 0.0;
    double t_end = 1.0;
    double width = 1.0;     // gaussian: sigma; smoothed-tophat: shoulder length
    bool has_compact_support() const { return kind != SwitchingKind::Gaussian; }

    void validate() const;
};

double eval_switching(const SwitchingSpec& s, double t);

enum class SeparationClass {
    Spacelike,
    TimelikeReachable,
    Mixed,
};

const char* to_string(SeparationClass c);

/// Per-integral accuracy knobs shared by every quadrature-backed operation.
struct QuadraturePolicy {
    double rel_tol = 1e-6;
    double abs_floor = 1e-12;
    int max_subdivisions = 2000;      // per axis
    double osc_points_per_period = 8; // nodes per period of e^{i dE t}
    double eps_start = 0.1;           // ladder top rung
    int eps_rungs = 8;                // halving ladder length

    void validate() const;
};

struct ScenarioSpec {
    FieldSpec field;
    DetectorSpec detector1;
    DetectorSpec detector2;
    SwitchingSpec switching;
    double energy_gap = 1.0; // dE = E_e - E_g > 0
    QuadraturePolicy quadrature;

    double separation() const; // L = |x1 - x2|
    void validate() const;
};

SeparationClass classify_separation(const ScenarioSpec& spec);

} // namespace fieldlink
