#pragma once

#include <utility>
#include <vector>

#include "kovtop/elliptic.hpp"
#include "kovtop/manifold.hpp"
#include "kovtop/statespace.hpp"

namespace kovtop {

/// Values (m, l) of the involutive pair M, L labelling J_{m,l}.
struct SeparationConstants {
    double m = 0.0;
    double l = 0.0;
};

/// Throws ValidationError unless m != 0 and l >= 0 (both finite).
SeparationConstants make_constants(double m, double l);

enum class Sign : int { negative = -1, positive = 1 };

constexpr int to_int(Sign s) { return static_cast<int>(s); }
constexpr Sign flip(Sign s) { return s == Sign::positive ? Sign::negative : Sign::positive; }
constexpr Sign sign_of(int v) { return v < 0 ? Sign::negative : Sign::positive; }
constexpr Sign operator*(Sign a, Sign b) { return sign_of(to_int(a) * to_int(b)); }

/// A point of J_{m,l} in separated coordinates. The four flags select the
/// branch of each elementary radical in the reconstruction:
///   sqrt(s1^2 - a^2) = eps1 rho1,       rho1 = sqrt(s1^2 - a^2) >= 0,
///   sqrt(s2^2 - b^2) = i eps2 rho2,     rho2 = sqrt(b^2 - s2^2) >= 0,
///   sqrt(Phi(s1))    = i sig1 phi1,     phi1 = sqrt(-Phi(s1)) >= 0,
///   sqrt(Phi(s2))    = sig2 phi2,       phi2 = sqrt(Phi(s2)) >= 0.
/// Along the flow s_i moves in the direction eps_i * sig_i.
struct SeparatedPoint {
    double s1 = 0.0;
    double s2 = 0.0;
    Sign eps1 = Sign::positive;
    Sign eps2 = Sign::positive;
    Sign sig1 = Sign::positive;
    Sign sig2 = Sign::positive;

    int direction1() const { return to_int(eps1 * sig1); }
    int direction2() const { return to_int(eps2 * sig2); }
};

/// s1 = (x1x2 + z1z2 + r^2) / (2 sqrt(x1x2)), s2 = (x1x2 + z1z2 - r^2) / (2 sqrt(x1x2)).
/// Throws DomainError when x1x2 = 0.
std::pair<double, double> s_from_state(const PhaseState& s, const BodyParams& p);

/// Phi(s) = 4m s^2 - 4l s + (l^2 - 1)/m.
double phi(double s, const SeparationConstants& c);

/// Roots (l - 1)/(2m), (l + 1)/(2m) in increasing order. The discriminant
/// of Phi is identically 16, so both are always real and distinct.
std::pair<double, double> phi_roots(const SeparationConstants& c);

/// Psi(s1, s2) = 4m s1 s2 - 2l (s1 + s2) + (l^2 - 1)/m.
double psi(double s1, double s2, const SeparationConstants& c);

/// m (x1x2 + z1z2) - l sqrt(x1x2) + sqrt(m^2 r^4 - m r^2 (x1 + x2) + x1x2),
/// which vanishes on J_{m,l}. Throws NegativeRadicand when the inner
/// radicand is negative, DomainError when x1x2 = 0.
double relation6_residual(const PhaseState& s, const SeparationConstants& c, const BodyParams& p);

/// Closed interval; endpoints may be infinite, lo == hi is a single point.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool degenerate() const { return lo == hi; }
    bool bounded() const;
    bool contains(double s, double tol = 0.0) const { return s >= lo - tol && s <= hi + tol; }
};

struct AdmissibleIntervals {
    std::vector<Interval> s1;  // components of {|s| >= a} and {Phi <= 0}
    std::vector<Interval> s2;  // components of {|s| <= b} and {Phi >= 0}
};

AdmissibleIntervals admissible_intervals(const SeparationConstants& c, const BodyParams& p);

/// (eps1 sig1 * sqrt((a^2 - s1^2) Phi(s1)) / 2, eps2 sig2 * sqrt((b^2 - s2^2) Phi(s2)) / 2).
/// Throws DomainError when a radicand is below -1e-12.
std::pair<double, double> separated_rhs(const SeparatedPoint& pt, const SeparationConstants& c,
                                        const BodyParams& p);

/// Chart values from the explicit formulas in (s1, s2).
ComplexChart reconstruct_chart(const SeparatedPoint& pt, const SeparationConstants& c,
                               const BodyParams& p);

/// Phase state at a separated point. Throws ValidationError for a point
/// outside the admissible region and DomainError for a vanishing
/// denominator Psi -+ sqrt(Phi(s1) Phi(s2)).
PhaseState reconstruct(const SeparatedPoint& pt, const SeparationConstants& c, const BodyParams& p);

/// Oscillation data of coordinate `which` (1 or 2) through the point s,
/// i.e. the quartic (c^2 - s^2) Phi(s) over the admissible component
/// containing s. Throws ValidationError if s is in no component or the
/// component is unbounded.
QuarticSpec oscillation_spec(int which, double s, const SeparationConstants& c, const BodyParams& p);

struct SeparatedSample {
    double t = 0.0;
    SeparatedPoint point;
};

struct SeparatedTolerance {
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
};

/// Integrates the separated system in the angles u_i with
/// s_i = mid_i + half_i sin(u_i), which removes the square-root turning
/// points: du_i/dt = sqrt(|C| f3(s_i) f4(s_i)) / 2 > 0, with f3, f4 the
/// two quartic factors that do not vanish on the interval. Flags flip at
/// every turning point: eps_i at +-a (resp. +-b), sig_i at roots of Phi.
/// A coordinate on a single-point interval stays constant.
std::vector<SeparatedSample> integrate_separated(const SeparatedPoint& p0,
                                                 const SeparationConstants& c,
                                                 const BodyParams& p, double t_end,
                                                 double sample_dt,
                                                 const SeparatedTolerance& tol = {});

/// Time between successive passes of the lower turning point, measured on
/// the regularized ODE (independent of the closed-form period).
double regularized_return_time(const QuarticSpec& spec, const SeparatedTolerance& tol = {});

struct CrosscheckRow {
    double t = 0.0;
    double s1_full = 0.0;
    double s1_sep = 0.0;
    double s2_full = 0.0;
    double s2_sep = 0.0;
};

struct CrosscheckReport {
    std::vector<CrosscheckRow> rows;
    double max_ds1 = 0.0;
    double max_ds2 = 0.0;
    double max_state_deviation = 0.0;  // |reconstruct(separated) - full state|_inf
};

struct CrosscheckConfig {
    double t_end = 10.0;
    double sample_dt = 0.05;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
};

/// Reconstructs the starting state, integrates the full Euler-Poisson
/// system and the separated system side by side, and compares s1, s2 and
/// the reconstructed phase states on a common grid. For a start on the
/// s1 < 0 branch the full-system values are mirrored, since s_from_state
/// always returns the nonnegative root.
CrosscheckReport crosscheck(const SeparatedPoint& p0, const SeparationConstants& c,
                            const BodyParams& p, const CrosscheckConfig& cfg = {});

}  // namespace kovtop
