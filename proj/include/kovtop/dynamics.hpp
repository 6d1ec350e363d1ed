#pragma once

#include <vector>

#include "kovtop/statespace.hpp"

namespace kovtop {

/// Euler-Poisson equations for I = diag(2, 2, 1) in the potential
/// -alpha1 - beta2:
///   2 dw1 = w2 w3 + beta3,  2 dw2 = -w1 w3 - alpha3,  dw3 = alpha2 - beta1,
///   dalpha = alpha x omega, dbeta = beta x omega.
/// This is dM/dt = M x omega + e1 x alpha + e2 x beta with M = I omega.
PhaseTangent euler_poisson_rhs(const PhaseState& s);

/// Residuals (dZ1/dt - w3 Z2, dZ2/dt + w3 Z1) along euler_poisson_rhs, where
/// Z1 + i Z2 = (w1 + i w2)^2 + x1. Both vanish identically, which is the
/// algebraic reason K = Z1^2 + Z2^2 is conserved.
struct KovalevskayaIdentity {
    double real_part;
    double imag_part;
};

KovalevskayaIdentity time_derivative_identities(const PhaseState& s);

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0.0;  // 0: unlimited
    double t_end = 10.0;
    double sample_dt = 0.1;
};

/// Largest deviation from the initial value over a run. For H, K, G, F, M, L
/// the deviation is divided by max(1, |initial value|); the Casimir entries
/// are absolute residual changes.
struct DriftReport {
    double h = 0.0;
    double k = 0.0;
    double g = 0.0;
    double f = 0.0;
    double m = 0.0;
    double l = 0.0;
    bool l_defined = true;  // false if L was undefined somewhere on the run
    double casimir_alpha = 0.0;
    double casimir_beta = 0.0;
    double casimir_cross = 0.0;

    double max_integral() const;
    double max_casimir() const;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<PhaseState> states;
    DriftReport drift;
    std::size_t steps = 0;
};

/// Adaptive DOP853 integration sampled every `sample_dt` up to t_end.
///
/// Throws ValidationError for an inadmissible initial state or bad config,
/// and IntegrationError on step underflow or when the drift of H, K or G
/// exceeds 1e3 times the expected level max(rel_tol, abs_tol) max(1, t_end).
Trajectory integrate(const PhaseState& state0, const IntegratorConfig& cfg,
                     const BodyParams& params);

}  // namespace kovtop
