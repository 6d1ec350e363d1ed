#pragma once

#include <complex>
#include <optional>

#include "kovtop/poisson.hpp"
#include "kovtop/statespace.hpp"

namespace kovtop {

using cplx = std::complex<double>;

/// Complex coordinates
///   x1 = (alpha1 - beta2) + i (alpha2 + beta1),
///   y1 = (alpha1 + beta2) + i (alpha2 - beta1),
///   z1 = alpha3 + i beta3,  w1 = omega1 + i omega2,  w3 = omega3,
/// with x2, y2, z2, w2 the conjugates on real states.
struct ComplexChart {
    cplx x1, x2, y1, y2, z1, z2, w1, w2;
    double w3 = 0.0;
};

ComplexChart state_to_chart(const PhaseState& s);

/// Inverse of state_to_chart. Throws DomainError if the chart is not the
/// image of a real state (conjugacy broken beyond `tol`, relative).
PhaseState chart_to_state(const ComplexChart& c, double tol = 1e-10);

struct ManifoldTolerance {
    double eps_f1 = 1e-8;
    double eps_f2 = 1e-8;
    double eps_f = 1e-8;
    double eps_domain = 1e-10;
};

struct F1F2 {
    cplx f1;
    cplx f2;
};

/// F1 = sqrt(x1x2) w3 - (x2 z1 w1 + x1 z2 w2) / sqrt(x1x2),
/// F2 = (i/2) [ (x2/x1)(w1^2 + x1) - (x1/x2)(w2^2 + x2) ],
/// with the nonnegative real root of x1x2. Throws DomainError when
/// |x1x2| < eps_domain (scaled by the squared size of the chart).
F1F2 F1_F2(const ComplexChart& c, double eps_domain = 1e-10);

struct MembershipReport {
    double abs_f1 = 0.0;
    double abs_f2 = 0.0;
    double abs_f = 0.0;
    bool member = false;
    std::optional<double> l;
    bool degenerate = false;  // L ~ 0: the induced structure is not symplectic here
};

MembershipReport on_N(const PhaseState& s, const BodyParams& p, const ManifoldTolerance& tol = {});

/// Left-minus-right residuals of
///   z1^2 + x1 y2 = r^2,  z2^2 + x2 y1 = r^2,  x1x2 + y1y2 + 2 z1z2 = 2 p^2.
struct ChartConstraintResiduals {
    cplx first;
    cplx second;
    double third = 0.0;
};

ChartConstraintResiduals constraint_residuals_chart(const ComplexChart& c, const BodyParams& p);

/// Real parts of F1 and F2 as bracket-ready fields (exact gradients).
ScalarField field_F1();
ScalarField field_F2();

/// {F2, F1} / (r^2 L). On N this equals a fixed sign; with the bracket
/// convention of lie_poisson_bracket that sign is -1 (kBracketSign).
/// Throws DomainError where x1x2 = 0, where L is undefined or |L| < eps.
double bracket_ratio(const PhaseState& s, const BodyParams& p, double eps = 1e-8);

inline constexpr double kBracketSign = -1.0;

/// Smallest singular value of the 2x9 Jacobian of (Re F1, Re F2) with
/// respect to (omega, alpha, beta).
double f1f2_min_singular_value(const PhaseState& s);

}  // namespace kovtop
