#pragma once

#include <array>

namespace kovtop {

/// Carlson's symmetric integral R_F(x, y, z) = 1/2 int_0^inf dt / sqrt((t+x)(t+y)(t+z))
/// by the duplication algorithm. Requires x, y, z >= 0 with at most one zero;
/// throws DomainError otherwise.
double carlson_rf(double x, double y, double z);

/// Complete elliptic integral of the first kind K(k^2) = R_F(0, 1 - k^2, 1).
double complete_k(double k_squared);

/// Oscillation of ds/dt = +-velocity_scale * sqrt(Q(s)) between two adjacent
/// real roots of the quartic Q(s) = coefficient * prod(s - roots[i]).
///
/// For the separated top equations Q(s) = (c^2 - s^2) Phi(s) with c = a or b,
/// i.e. coefficient = -4m and roots {-c, c, (l-1)/2m, (l+1)/2m}.
struct QuarticSpec {
    std::array<double, 4> roots{};  // increasing
    double coefficient = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double velocity_scale = 0.5;

    double value(double s) const;
    bool degenerate() const { return lower == upper; }
};

/// Builds the quartic (c^2 - s^2) Phi(s) for Phi(s) = 4m s^2 - 4l s + (l^2-1)/m
/// and the oscillation interval [lower, upper]. Throws ValidationError if the
/// interval endpoints are not roots or Q is negative inside.
QuarticSpec make_quartic(double field_bound, double m, double l, double lower, double upper);

enum class PeriodKind {
    finite,
    degenerate_point,  // lower == upper: the coordinate is at rest
    separatrix,        // an endpoint is a multiple root: the return time is infinite
};

struct PeriodResult {
    double value = 0.0;  // 0 for degenerate_point, +inf for separatrix
    PeriodKind kind = PeriodKind::finite;
};

/// Period of the oscillation in closed form:
///   T = 2 / (velocity_scale sqrt|C|) * 2 K(k) / sqrt((r4 - r2)(r3 - r1)),
/// where k^2 depends on which adjacent pair of roots bounds the motion.
PeriodResult period(const QuarticSpec& spec);

/// Travel time from `lower` to s (s inside the interval), via the Carlson
/// form of the incomplete quartic integral.
double time_from_lower(const QuarticSpec& spec, double s);

struct OscillatorState {
    double s = 0.0;
    int direction = 1;  // +1 moving toward `upper`, -1 toward `lower`
};

/// Position and direction at time t of the oscillation started at s0 moving
/// in direction dir0. Inverts the incomplete integral with a safeguarded
/// Newton iteration in the angle s = mid + half sin(u). At the turning points
/// the direction reported is the one taken right after the turn.
OscillatorState s_of_t(const QuarticSpec& spec, double s0, int dir0, double t);

}  // namespace kovtop
