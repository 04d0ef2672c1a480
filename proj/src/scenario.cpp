#include "fieldlink/scenario.hpp"

#include <cmath>

namespace fieldlink {

void FieldSpec::validate() const {
    if (!(mass >= 0.0) || !std::isfinite(mass))
        throw ScenarioError("field mass must be finite and >= 0");
}

void DetectorSpec::validate() const {
    if (!(coupling >= 0.0) || !std::isfinite(coupling))
        throw ScenarioError("detector coupling must be finite and >= 0");
    if (smearing_width && !(*smearing_width > 0.0))
        throw ScenarioError("smearing width must be > 0 when present");
    for (double c : position)
        if (!std::isfinite(c)) throw ScenarioError("detector position must be finite");
}

void SwitchingSpec::validate() const {
    if (!(t_start < t_end))
        throw ScenarioError("switching window requires t_start < t_end");
    if (kind != SwitchingKind::SmoothBump && !(width > 0.0))
        throw ScenarioError("switching width must be > 0");
    if (kind == SwitchingKind::SmoothedTophat && !(2.0 * width < t_end - t_start))
        throw ScenarioError("smoothed-tophat shoulders must fit inside the window");
}

void QuadraturePolicy::validate() const {
    if (!(rel_tol > 0.0) || !(abs_floor > 0.0))
        throw ScenarioError("quadrature tolerances must be positive");
    if (!(osc_points_per_period >= 4.0))
        throw ScenarioError("oscillation resolution factor must be >= 4");
    if (max_subdivisions < 8) throw ScenarioError("subdivision budget too small");
    if (!(eps_start > 0.0) || eps_rungs < 3)
        throw ScenarioError("regulator ladder needs eps_start > 0 and >= 3 rungs");
}

double eval_switching(const SwitchingSpec& s, double t) {
    switch (s.kind) {
        case SwitchingKind::SmoothBump: {
            const double u = (2.0 * t - s.t_start - s.t_end) / (s.t_end - s.t_start);
            if (std::abs(u) >= 1.0) return 0.0;
            return std::exp(1.0 - 1.0 / (1.0 - u * u));
        }
        case SwitchingKind::Gaussian: {
            const double c = 0.5 * (s.t_start + s.t_end);
            const double z = (t - c) / s.width;
            return std::exp(-0.5 * z * z);
        }
        case SwitchingKind::SmoothedTophat: {
            // C-infinity shoulders built from the standard exp(-1/x) step.
            if (t <= s.t_start || t >= s.t_end) return 0.0;
            auto step = [](double x) {
                // smooth 0->1 transition on [0,1]
                if (x <= 0.0) return 0.0;
                if (x >= 1.0) return 1.0;
                const double a = std::exp(-1.0 / x);
                const double b = std::exp(-1.0 / (1.0 - x));
                return a / (a + b);
            };
            const double up = step((t - s.t_start) / s.width);
            const double down = step((s.t_end - t) / s.width);
            return up * down;
        }
    }
    return 0.0;
}

const char* to_string(SeparationClass c) {
    switch (c) {
        case SeparationClass::Spacelike: return "spacelike";
        case SeparationClass::TimelikeReachable: return "timelike-reachable";
        case SeparationClass::Mixed: return "mixed";
    }
    return "?";
}

double ScenarioSpec::separation() const {
    double s = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double d = detector1.position[i] - detector2.position[i];
        s += d * d;
    }
    return std::sqrt(s);
}

void ScenarioSpec::validate() const {
    field.validate();
    detector1.validate();
    detector2.validate();
    switching.validate();
    quadrature.validate();
    if (!(energy_gap > 0.0)) throw ScenarioError("energy gap dE must be > 0");
    if (!(separation() > 0.0)) throw ScenarioError("detector separation L must be > 0");
}

SeparationClass classify_separation(const ScenarioSpec& spec) {
    if (!spec.switching.has_compact_support())
        throw ScenarioError("separation class undefined for non-compact support");
    const double window = spec.switching.t_end - spec.switching.t_start;
    const double L = spec.separation();
    // sup{ t - t' : eta(t) eta(t') > 0 } = window length for compact kinds
    if (window < L) return SeparationClass::Spacelike;
    // the whole second window is causally reachable once every emission time can
    // be paired with an absorption after light travel
    if (window > 2.0 * L) return SeparationClass::TimelikeReachable;
    return SeparationClass::Mixed;
}

} // namespace fieldlink
