#pragma once

#include "fieldlink/channel_algebra.hpp"

namespace fieldlink {

struct CapacityResult {
    double capacity_bits = 0.0;
    double capacity_nats = 0.0;
    double optimal_prior = 0.5; // probability of sending |e>
    double rate_bits_per_time = 0.0;
    int iterations = 0;
    double bracket_width = 0.0;
    bool degenerate = false; // A == B: output independent of input
};

struct CoherentInfoResult {
    double value = 0.0;         // raw optimum, may be negative
    double value_clamped = 0.0; // max(value, 0)
    double bloch[3] = {0.0, 0.0, 0.0};
    int restarts = 0;
};

/// H(x) = -x ln x - (1-x) ln(1-x), in nats; H(0) = H(1) = 0.
double binary_entropy(double x);

/// Product-state capacity of the induced binary asymmetric channel, maximized
/// over the prior on the extreme inputs |e><e| and |g><g|.
/// window_length scales the reported rate; pass 0 to skip the rate.
CapacityResult classical_capacity(const ChannelParams& p, double window_length = 0.0);

/// Closed-form optimal prior from the stationarity condition; base-2
/// convention throughout. Cross-check for classical_capacity.
double closed_form_prior(const ChannelParams& p);

/// Single-use coherent information max_rho [S(Xi(rho)) - S(Xi^C(rho))],
/// multi-start simplex search over the Bloch ball. Deterministic given seed.
CoherentInfoResult coherent_information_single_use(const ChannelParams& p,
                                                   unsigned seed = 20260826, int restarts = 32);

} // namespace fieldlink
