#pragma once

#include <functional>
#include <optional>
#include <string>

#include "kovtop/statespace.hpp"

namespace kovtop {

/// Values of the first integrals at one phase point.
///
/// f and m are computed from h, k, g so that m r^4 = 2g - p^2 h and
/// f = (2g - p^2 h)^2 - r^4 k hold by construction. `l` is empty where
/// the radicand 2 p^2 m^2 + 2 h m + 1 is negative.
struct IntegralValues {
    double h = 0.0;
    double k = 0.0;
    double g = 0.0;
    double f = 0.0;
    double m = 0.0;
    std::optional<double> l;
    double l_radicand = 0.0;
};

/// Angular momentum M = I omega with I = diag(2, 2, 1), together with the
/// field vectors. These are the coordinates the bracket is written in.
struct MomentumChart {
    Vec3 momentum;
    Vec3 alpha;
    Vec3 beta;
};

MomentumChart to_momentum(const PhaseState& s);
PhaseState from_momentum(const MomentumChart& c);

double integral_H(const PhaseState& s);
double integral_K(const PhaseState& s);

struct AuxOmegas {
    double alpha;
    double beta;
    double gamma;
};

AuxOmegas aux_omegas(const PhaseState& s);

double integral_G(const PhaseState& s, const BodyParams& p);

IntegralValues integral_FML(const PhaseState& s, const BodyParams& p);

/// A scalar function on phase space. `gradient`, when set, returns exact
/// partial derivatives in (omega, alpha, beta) order; otherwise the bracket
/// engine falls back to central differences.
struct ScalarField {
    std::string name;
    std::function<double(const PhaseState&)> value;
    std::function<PhaseVector(const PhaseState&)> gradient;
};

/// Partial derivatives in (omega, alpha, beta) order. Uses the analytic
/// gradient when present, otherwise central differences with step
/// 1e-6 max(1, |u_i|) in the momentum coordinates.
PhaseVector gradient(const ScalarField& f, const PhaseState& s);

/// Lie-Poisson bracket on e(3) x R^3:
///   {M_i, M_j} = -eps_ijk M_k, {M_i, alpha_j} = -eps_ijk alpha_k,
///   {M_i, beta_j} = -eps_ijk beta_k, all other basic brackets zero.
/// With this sign, du/dt = {u, H} reproduces euler_poisson_rhs.
/// Throws DomainError on a non-finite gradient.
double lie_poisson_bracket(const ScalarField& f, const ScalarField& g, const PhaseState& s);

/// Tangent {u_i, H} mapped back to (omega, alpha, beta).
PhaseTangent hamiltonian_field(const PhaseState& s);

// Built-in fields with exact gradients.
ScalarField field_H();
ScalarField field_K();
ScalarField field_G(const BodyParams& p);
ScalarField field_F(const BodyParams& p);
ScalarField field_M(const BodyParams& p);
/// L = sqrt(radicand); value and gradient are NaN where L is undefined.
ScalarField field_L(const BodyParams& p);
ScalarField field_alpha_norm();
ScalarField field_beta_norm();
ScalarField field_alpha_beta();

}  // namespace kovtop
