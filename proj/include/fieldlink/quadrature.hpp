#pragma once

#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fieldlink/scenario.hpp"

namespace fieldlink {

using Complex = std::complex<double>;

struct QuadratureError : std::runtime_error {
    QuadratureError(const std::string& msg, Complex best, double estimate)
        : std::runtime_error(msg), best_value(best), error_estimate(estimate) {}
    Complex best_value;
    double error_estimate;
};

struct IntegralResult {
    Complex value{0.0, 0.0};
    double error_estimate = 0.0;
    double ladder_residual = 0.0;
    long evaluations = 0;
    bool boundary_warning = false; // delta locus grazing the integration region
};

/// Adaptive Gauss-Kronrod (G7,K15) on [a,b]. split_hints seed subdivision
/// points (known singular loci); omega seeds oscillation resolution.
IntegralResult integrate_1d(const std::function<Complex(double)>& f, double a, double b,
                            const QuadraturePolicy& policy,
                            std::span<const double> split_hints = {}, double omega = 0.0);

/// Integral of f(t1,...,tk) over the ordered simplex
/// t_i <= t_k <= ... <= t_1 <= t_f, realized as nested clamped 1D rules.
IntegralResult integrate_simplex(const std::function<Complex(std::span<const double>)>& f,
                                 int k, double t_lo, double t_hi,
                                 const QuadraturePolicy& policy, double omega = 0.0);

/// Richardson extrapolation to eps = 0 of a polynomial-in-eps ladder.
/// rungs = {(eps_i, value_i)} with eps strictly decreasing, >= 3 entries.
std::pair<Complex, double> extrapolate_ladder(std::span<const std::pair<double, Complex>> rungs,
                                              int order = -1);

struct CommutatorSupport; // correlators.hpp

/// Reduced integrand after pinning `axis` of an ordered k-simplex integrand to
/// the delta loci of a massless commutator whose time argument is
/// t[axis] - t[other] (sign fixed by the caller through `support`).
struct CollapsedIntegrand {
    std::function<Complex(std::span<const double>)> f; // k-1 remaining variables
    bool boundary_warning = false;
};

CollapsedIntegrand collapse_delta(const std::function<Complex(std::span<const double>)>& f,
                                  const CommutatorSupport& support, int axis, int other_axis,
                                  int k, double t_lo, double t_hi, double boundary_tol = 1e-12);

} // namespace fieldlink
