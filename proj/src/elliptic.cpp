#include "kovtop/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "kovtop/error.hpp"

namespace kovtop {

double carlson_rf(double x, double y, double z) {
    if (!(x >= 0.0 && y >= 0.0 && z >= 0.0) || !std::isfinite(x + y + z)) {
        throw DomainError("carlson_rf: arguments must be finite and nonnegative");
    }
    if ((x == 0.0) + (y == 0.0) + (z == 0.0) > 1) {
        throw DomainError("carlson_rf: at most one argument may vanish");
    }
    // Duplication until 4^-n Q < |A|, with Q chosen for a relative error of 1e-16.
    constexpr double kTol = 1e-16;
    const double x0 = x, y0 = y;
    const double a0 = (x + y + z) / 3.0;
    double q = std::pow(3.0 * kTol, -1.0 / 6.0) *
               std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z)});
    double a = a0;
    double pow4 = 1.0;
    for (int iter = 0; iter < 100 && pow4 * q >= std::abs(a); ++iter) {
        const double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
        const double lambda = sx * sy + sx * sz + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        a = 0.25 * (a + lambda);
        pow4 *= 0.25;
    }
    const double dx = (a0 - x0) * pow4 / a;
    const double dy = (a0 - y0) * pow4 / a;
    const double dz = -(dx + dy);
    const double e2 = dx * dy - dz * dz;
    const double e3 = dx * dy * dz;
    return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / std::sqrt(a);
}

double complete_k(double k_squared) {
    if (!(k_squared < 1.0)) throw DomainError("complete_k: k^2 must be below 1");
    return carlson_rf(0.0, 1.0 - k_squared, 1.0);
}

double QuarticSpec::value(double s) const {
    double q = coefficient;
    for (double r : roots) q *= (s - r);
    return q;
}

namespace {

// Index i with [roots[i], roots[i+1]] the oscillation interval.
int interval_index(const QuarticSpec& spec) {
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i) {
        const double d = std::abs(spec.roots[i] - spec.lower) + std::abs(spec.roots[i + 1] - spec.upper);
        if (d < best_dist) {
            best_dist = d;
            best = i;
        }
    }
    return best;
}

// a + b t for each of the four factors, all nonnegative on [lower, upper].
struct LinearFactor {
    double a;
    double b;
    double at(double t) const { return std::max(0.0, a + b * t); }
};

std::array<LinearFactor, 4> positive_factors(const QuarticSpec& spec) {
    const int i = interval_index(spec);
    std::array<LinearFactor, 4> f{};
    f[0] = {-spec.lower, 1.0};
    f[1] = {spec.upper, -1.0};
    int k = 2;
    for (int j = 0; j < 4; ++j) {
        if (j == i || j == i + 1) continue;
        const double r = spec.roots[j];
        f[k++] = j < i ? LinearFactor{-r, 1.0} : LinearFactor{r, -1.0};
    }
    return f;
}

double time_scale(const QuarticSpec& spec) {
    return 1.0 / (spec.velocity_scale * std::sqrt(std::abs(spec.coefficient)));
}

bool nearly_equal(double x, double y) {
    return std::abs(x - y) <= 1e-13 * std::max({1.0, std::abs(x), std::abs(y)});
}

}  // namespace

QuarticSpec make_quartic(double field_bound, double m, double l, double lower, double upper) {
    if (m == 0.0) throw ValidationError("m = 0 is excluded");
    if (!(lower <= upper)) throw ValidationError("interval endpoints out of order");
    QuarticSpec spec;
    const double r0 = (l - 1.0) / (2.0 * m);
    const double r1 = (l + 1.0) / (2.0 * m);
    spec.roots = {-field_bound, field_bound, r0, r1};
    std::sort(spec.roots.begin(), spec.roots.end());
    spec.coefficient = -4.0 * m;
    // Snap the endpoints onto the stored roots so the interval is exact.
    auto snap = [&](double e) {
        for (double r : spec.roots) {
            if (nearly_equal(r, e)) return r;
        }
        std::ostringstream msg;
        msg << "interval endpoint " << e << " is not a root of the quartic";
        throw ValidationError(msg.str());
    };
    spec.lower = snap(lower);
    spec.upper = snap(upper);
    if (spec.lower < spec.upper) {
        const double mid = 0.5 * (spec.lower + spec.upper);
        if (spec.value(mid) < 0.0) {
            throw ValidationError("quartic is negative inside the requested interval");
        }
    }
    return spec;
}

PeriodResult period(const QuarticSpec& spec) {
    if (spec.degenerate()) return {0.0, PeriodKind::degenerate_point};
    const int i = interval_index(spec);
    const auto& r = spec.roots;
    if ((i > 0 && nearly_equal(r[i - 1], r[i])) || (i < 2 && nearly_equal(r[i + 1], r[i + 2]))) {
        return {std::numeric_limits<double>::infinity(), PeriodKind::separatrix};
    }
    const double den = (r[3] - r[1]) * (r[2] - r[0]);
    const double k2 = i == 1 ? (r[2] - r[1]) * (r[3] - r[0]) / den
                             : (r[1] - r[0]) * (r[3] - r[2]) / den;
    const double half = time_scale(spec) * 2.0 * complete_k(k2) / std::sqrt(den);
    return {2.0 * half, PeriodKind::finite};
}

double time_from_lower(const QuarticSpec& spec, double s) {
    if (s <= spec.lower) return 0.0;
    s = std::min(s, spec.upper);
    const auto f = positive_factors(spec);
    const double x = s;
    const double y = spec.lower;
    std::array<double, 4> X{}, Y{};
    for (int k = 0; k < 4; ++k) {
        X[k] = std::sqrt(f[k].at(x));
        Y[k] = std::sqrt(f[k].at(y));
    }
    const double d = x - y;
    const double u12 = (X[0] * X[1] * Y[2] * Y[3] + Y[0] * Y[1] * X[2] * X[3]) / d;
    const double u13 = (X[0] * X[2] * Y[1] * Y[3] + Y[0] * Y[2] * X[1] * X[3]) / d;
    const double u14 = (X[0] * X[3] * Y[1] * Y[2] + Y[0] * Y[3] * X[1] * X[2]) / d;
    return time_scale(spec) * 2.0 * carlson_rf(u12 * u12, u13 * u13, u14 * u14);
}

OscillatorState s_of_t(const QuarticSpec& spec, double s0, int dir0, double t) {
    if (s0 < spec.lower - 1e-12 * std::max(1.0, std::abs(spec.lower)) ||
        s0 > spec.upper + 1e-12 * std::max(1.0, std::abs(spec.upper))) {
        throw DomainError("s_of_t: starting point lies outside the oscillation interval");
    }
    const int dir = dir0 >= 0 ? 1 : -1;
    if (t == 0.0 || spec.degenerate()) return {s0, dir};
    const PeriodResult per = period(spec);
    if (per.kind != PeriodKind::finite) {
        throw DomainError("s_of_t: the oscillation has no finite period (separatrix)");
    }
    const double T = per.value;
    const double half_period = 0.5 * T;

    const double tau0 = time_from_lower(spec, std::clamp(s0, spec.lower, spec.upper));
    double phase = std::fmod((dir > 0 ? tau0 : T - tau0) + t, T);
    if (phase < 0.0) phase += T;

    const bool rising = phase < half_period;
    const double target = rising ? phase : T - phase;

    // Solve time_from_lower(s(u)) = target for u in [-pi/2, pi/2].
    const double mid = 0.5 * (spec.lower + spec.upper);
    const double halfw = 0.5 * (spec.upper - spec.lower);
    const auto f = positive_factors(spec);
    auto s_at = [&](double u) { return mid + halfw * std::sin(u); };
    auto dtau_du = [&](double u) {
        const double s = s_at(u);
        return time_scale(spec) / std::sqrt(f[2].at(s) * f[3].at(s));
    };
    double lo = -std::numbers::pi / 2, hi = std::numbers::pi / 2;
    double u = -std::numbers::pi / 2 + std::numbers::pi * (target / half_period);
    for (int iter = 0; iter < 200; ++iter) {
        const double g = time_from_lower(spec, s_at(u)) - target;
        if (g > 0.0) hi = u; else lo = u;
        double next = u - g / dtau_du(u);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - u) <= 1e-15 * std::max(1.0, std::abs(u)) || hi - lo <= 1e-15) {
            u = next;
            break;
        }
        u = next;
    }
    return {s_at(u), rising ? 1 : -1};
}

}  // namespace kovtop
