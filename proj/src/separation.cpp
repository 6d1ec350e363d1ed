#include "kovtop/separation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "kovtop/dynamics.hpp"
#include "kovtop/error.hpp"
#include "kovtop/mutation.hpp"
#include "kovtop/ode.hpp"

namespace kovtop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

double radicand_tol(double scale) { return 1e-12 * std::max(1.0, scale); }

struct ChartScalars {
    double x1x2;
    double z1z2;
    double x_sum;  // x1 + x2, real
};

ChartScalars chart_scalars(const PhaseState& s) {
    const ComplexChart c = state_to_chart(s);
    const double scale = std::max({1.0, std::abs(c.x1), std::abs(c.z1)});
    const double x1x2 = std::norm(c.x1);
    if (!(x1x2 >= 1e-10 * scale * scale)) {
        std::ostringstream msg;
        msg << "x1 x2 = " << x1x2 << " is outside the chart domain x1 x2 != 0";
        throw DomainError(msg.str());
    }
    return {x1x2, std::norm(c.z1), 2.0 * c.x1.real()};
}

bool near(double x, double y) {
    return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)});
}

struct Breakpoint {
    double value;
    bool is_root;
    bool is_bound;
};

template <typename InBound, typename PhiOk>
std::vector<Interval> components(double bound, const SeparationConstants& c, InBound in_bound,
                                 PhiOk phi_ok) {
    const auto [r0, r1] = phi_roots(c);
    std::vector<Breakpoint> raw = {
        {-bound, false, true}, {bound, false, true}, {r0, true, false}, {r1, true, false}};
    std::sort(raw.begin(), raw.end(),
              [](const Breakpoint& x, const Breakpoint& y) { return x.value < y.value; });
    std::vector<Breakpoint> pts;
    for (const auto& b : raw) {
        if (!pts.empty() && near(pts.back().value, b.value)) {
            // Keep the field bound as the representative value: it is exact.
            if (b.is_bound) pts.back().value = b.value;
            pts.back().is_root = pts.back().is_root || b.is_root;
            pts.back().is_bound = pts.back().is_bound || b.is_bound;
        } else {
            pts.push_back(b);
        }
    }

    auto inside = [&](double s) { return in_bound(s) && phi_ok(phi(s, c)); };
    const std::size_t n = pts.size();
    // Elements in order: gap 0, point 0, gap 1, ..., point n-1, gap n.
    std::vector<bool> gap_in(n + 1), point_in(n);
    for (std::size_t k = 0; k <= n; ++k) {
        double probe;
        if (k == 0) {
            probe = pts.front().value - 1.0 - std::abs(pts.front().value);
        } else if (k == n) {
            probe = pts.back().value + 1.0 + std::abs(pts.back().value);
        } else {
            probe = 0.5 * (pts[k - 1].value + pts[k].value);
        }
        gap_in[k] = inside(probe);
    }
    for (std::size_t k = 0; k < n; ++k) {
        const auto& b = pts[k];
        const bool bound_ok = b.is_bound || in_bound(b.value);
        const bool phi_good = b.is_root || phi_ok(phi(b.value, c));
        point_in[k] = bound_ok && phi_good;
    }

    std::vector<Interval> out;
    bool open = false;
    Interval cur;
    auto lower_edge = [&](std::size_t gap) { return gap == 0 ? -kInf : pts[gap - 1].value; };
    auto upper_edge = [&](std::size_t gap) { return gap == n ? kInf : pts[gap].value; };
    for (std::size_t k = 0; k <= n; ++k) {
        if (gap_in[k]) {
            if (!open) {
                cur.lo = lower_edge(k);
                open = true;
            }
            cur.hi = upper_edge(k);
        } else if (open) {
            out.push_back(cur);
            open = false;
        }
        if (k == n) break;
        if (point_in[k]) {
            if (!open) {
                cur.lo = pts[k].value;
                open = true;
            }
            cur.hi = pts[k].value;
        } else if (open) {
            out.push_back(cur);
            open = false;
        }
    }
    if (open) out.push_back(cur);
    return out;
}

// Regularized angle description of one oscillating coordinate.
struct AngleChart {
    QuarticSpec spec;
    double mid = 0.0;
    double half = 0.0;
    double field_bound = 0.0;
    std::array<double, 2> other_roots{};
    std::array<bool, 2> other_below{};

    double s_at(double u) const { return mid + half * std::sin(u); }

    double rate(double u) const {
        if (half == 0.0) return 0.0;
        const double s = s_at(u);
        double prod = std::abs(spec.coefficient);
        for (int k = 0; k < 2; ++k) {
            prod *= std::max(0.0, other_below[k] ? s - other_roots[k] : other_roots[k] - s);
        }
        return spec.velocity_scale * std::sqrt(prod);
    }

    bool lower_is_bound() const { return std::abs(spec.lower) == field_bound; }
    bool upper_is_bound() const { return std::abs(spec.upper) == field_bound; }
};

AngleChart make_angle_chart(const QuarticSpec& spec, double field_bound) {
    AngleChart a;
    a.spec = spec;
    a.mid = 0.5 * (spec.lower + spec.upper);
    a.half = 0.5 * (spec.upper - spec.lower);
    a.field_bound = field_bound;
    // The two roots that are not the interval endpoints.
    bool used_lower = false, used_upper = false;
    int k = 0;
    for (double r : spec.roots) {
        if (!used_lower && r == spec.lower) {
            used_lower = true;
            continue;
        }
        if (!used_upper && r == spec.upper) {
            used_upper = true;
            continue;
        }
        if (k < 2) {
            a.other_roots[k] = r;
            a.other_below[k] = r <= spec.lower;
            ++k;
        }
    }
    return a;
}

// Starting angle for s0 moving in direction dir. A start exactly at a
// turning point with the outward direction is treated as having just
// bounced, so the caller flips the corresponding flag first.
double start_angle(const AngleChart& a, double s0, int dir) {
    if (a.half == 0.0) return 0.0;
    const double x = std::clamp((s0 - a.mid) / a.half, -1.0, 1.0);
    const double u = std::asin(x);
    return dir >= 0 ? u : kPi - u;
}

long long count_passes(double u0, double u, double offset) {
    return static_cast<long long>(std::floor((u - offset) / (2.0 * kPi))) -
           static_cast<long long>(std::floor((u0 - offset) / (2.0 * kPi)));
}

struct CoordinateState {
    double s;
    Sign eps;
    Sign sig;
};

CoordinateState flags_after(const AngleChart& a, double u0, double u, Sign eps0, Sign sig0) {
    if (a.half == 0.0) return {a.mid, eps0, sig0};
    const long long upper = count_passes(u0, u, kPi / 2);
    const long long lower = count_passes(u0, u, -kPi / 2);
    Sign eps = eps0, sig = sig0;
    auto apply = [&](long long passes, bool is_bound) {
        if (passes % 2 == 0) return;
        if (is_bound) eps = flip(eps); else sig = flip(sig);
    };
    apply(upper, a.upper_is_bound());
    apply(lower, a.lower_is_bound());
    double s = a.s_at(u);
    s = std::clamp(s, a.spec.lower, a.spec.upper);
    return {s, eps, sig};
}

// Pre-bounce for a start at a turning point heading outward.
void normalize_start(const AngleChart& a, double s, Sign& eps, Sign& sig) {
    if (a.half == 0.0) return;
    const int dir = to_int(eps * sig);
    const bool at_upper = s >= a.spec.upper && dir > 0;
    const bool at_lower = s <= a.spec.lower && dir < 0;
    if (at_upper) {
        if (a.upper_is_bound()) eps = flip(eps); else sig = flip(sig);
    } else if (at_lower) {
        if (a.lower_is_bound()) eps = flip(eps); else sig = flip(sig);
    }
}

double field_bound_for(int which, const BodyParams& p) { return which == 1 ? p.a : p.b; }

}  // namespace

SeparationConstants make_constants(double m, double l) {
    if (!std::isfinite(m) || !std::isfinite(l)) throw ValidationError("m and l must be finite");
    if (m == 0.0) throw ValidationError("m = 0 is excluded (Phi is undefined)");
    if (l < 0.0) throw ValidationError("l must be nonnegative (L is a square root)");
    return {m, l};
}

std::pair<double, double> s_from_state(const PhaseState& s, const BodyParams& p) {
    const auto cs = chart_scalars(s);
    const double root = std::sqrt(cs.x1x2);
    return {(cs.x1x2 + cs.z1z2 + p.r2) / (2.0 * root), (cs.x1x2 + cs.z1z2 - p.r2) / (2.0 * root)};
}

double phi(double s, const SeparationConstants& c) {
    if (c.m == 0.0) throw ValidationError("m = 0 is excluded (Phi is undefined)");
    return 4.0 * c.m * s * s - 4.0 * c.l * s + (c.l * c.l - 1.0) / c.m;
}

std::pair<double, double> phi_roots(const SeparationConstants& c) {
    if (c.m == 0.0) throw ValidationError("m = 0 is excluded (Phi is undefined)");
    const double r0 = (c.l - 1.0) / (2.0 * c.m);
    const double r1 = (c.l + 1.0) / (2.0 * c.m);
    return {std::min(r0, r1), std::max(r0, r1)};
}

double psi(double s1, double s2, const SeparationConstants& c) {
    if (c.m == 0.0) throw ValidationError("m = 0 is excluded (Psi is undefined)");
    return 4.0 * c.m * s1 * s2 - 2.0 * c.l * (s1 + s2) + (c.l * c.l - 1.0) / c.m;
}

double relation6_residual(const PhaseState& s, const SeparationConstants& c, const BodyParams& p) {
    const auto cs = chart_scalars(s);
    const double rad = c.m * c.m * p.r4() - c.m * p.r2 * cs.x_sum + cs.x1x2;
    const double scale = std::max({1.0, c.m * c.m * p.r4(), cs.x1x2});
    if (rad < -radicand_tol(scale)) {
        throw NegativeRadicand("relation (L = l form): inner radicand is negative", rad);
    }
    return c.m * (cs.x1x2 + cs.z1z2) - c.l * std::sqrt(cs.x1x2) + std::sqrt(std::max(0.0, rad));
}

bool Interval::bounded() const { return std::isfinite(lo) && std::isfinite(hi); }

AdmissibleIntervals admissible_intervals(const SeparationConstants& c, const BodyParams& p) {
    if (c.m == 0.0) throw ValidationError("m = 0 is excluded");
    AdmissibleIntervals out;
    out.s1 = components(
        p.a, c, [&](double s) { return std::abs(s) >= p.a; }, [](double v) { return v <= 0.0; });
    out.s2 = components(
        p.b, c, [&](double s) { return std::abs(s) <= p.b; }, [](double v) { return v >= 0.0; });
    return out;
}

std::pair<double, double> separated_rhs(const SeparatedPoint& pt, const SeparationConstants& c,
                                        const BodyParams& p) {
    const double q1 = (p.a * p.a - pt.s1 * pt.s1) * phi(pt.s1, c);
    const double q2 = (p.b * p.b - pt.s2 * pt.s2) * phi(pt.s2, c);
    if (q1 < -1e-12 || q2 < -1e-12) {
        std::ostringstream msg;
        msg << "point (" << pt.s1 << ", " << pt.s2 << ") is outside the admissible region";
        throw DomainError(msg.str());
    }
    return {pt.direction1() * 0.5 * std::sqrt(std::max(0.0, q1)),
            pt.direction2() * 0.5 * std::sqrt(std::max(0.0, q2))};
}

ComplexChart reconstruct_chart(const SeparatedPoint& pt, const SeparationConstants& c,
                               const BodyParams& p) {
    const double s1 = pt.s1, s2 = pt.s2;
    const double a2 = p.a * p.a, b2 = p.b * p.b;
    const double phi1 = phi(s1, c), phi2 = phi(s2, c);
    const double scale = std::max({1.0, a2, s1 * s1});
    const double tol = radicand_tol(scale);
    const double tol_phi = radicand_tol(std::max({1.0, std::abs(4.0 * c.m) * s1 * s1,
                                                  std::abs((c.l * c.l - 1.0) / c.m)}));
    if (s1 * s1 - a2 < -tol || b2 - s2 * s2 < -tol || phi1 > tol_phi || phi2 < -tol_phi) {
        std::ostringstream msg;
        msg << "separated point (" << s1 << ", " << s2
            << ") violates s1^2 >= a^2, s2^2 <= b^2, Phi(s1) <= 0, Phi(s2) >= 0";
        throw ValidationError(msg.str());
    }

    const Mutation mut = active_mutation();
    auto signed_flag = [&](Sign s, Mutation flips) {
        return static_cast<double>(to_int(s)) * (mut == flips ? -1.0 : 1.0);
    };
    const cplx i(0.0, 1.0);
    // Elementary radicals; every composite radical is their product.
    const cplx root_a = signed_flag(pt.eps1, Mutation::recon_rho1) * std::sqrt(std::max(0.0, s1 * s1 - a2));
    const cplx root_b = i * signed_flag(pt.eps2, Mutation::recon_rho2) * std::sqrt(std::max(0.0, b2 - s2 * s2));
    const cplx root_phi1 = i * signed_flag(pt.sig1, Mutation::recon_phi1) * std::sqrt(std::max(0.0, -phi1));
    const cplx root_phi2 = signed_flag(pt.sig2, Mutation::recon_phi2) * std::sqrt(std::max(0.0, phi2));
    const cplx root_phi12 = (mut == Mutation::recon_composite ? -1.0 : 1.0) * root_phi1 * root_phi2;

    const double ps = psi(s1, s2, c);
    const cplx den_minus = ps - root_phi12;
    const cplx den_plus = ps + root_phi12;
    const double den_scale = std::max(1.0, std::abs(ps));
    if (std::abs(den_minus) <= 1e-14 * den_scale || std::abs(den_plus) <= 1e-14 * den_scale) {
        throw DomainError("vanishing denominator Psi -+ sqrt(Phi(s1) Phi(s2)) in reconstruction");
    }
    const double d = s1 - s2;
    if (d == 0.0) throw DomainError("s1 = s2 in reconstruction");
    const double r = p.r();
    const double base = 2.0 * s1 * s2 - p.p2;
    const cplx root_ab = root_a * root_b;

    ComplexChart ch;
    ch.x1 = -p.r2 / (2.0 * d * d) * (ps + root_phi12);
    ch.x2 = -p.r2 / (2.0 * d * d) * (ps - root_phi12);
    ch.y1 = 2.0 * (base - 2.0 * root_ab) / den_minus;
    ch.y2 = 2.0 * (base + 2.0 * root_ab) / den_plus;
    ch.z1 = r / d * (root_a + root_b);
    ch.z2 = r / d * (root_a - root_b);
    ch.w1 = r * (root_phi2 - root_phi1) / den_minus;
    ch.w2 = r * (root_phi2 + root_phi1) / den_plus;
    const cplx w3 = (root_b * root_phi1 - root_a * root_phi2) / d;
    ch.w3 = w3.real();
    return ch;
}

PhaseState reconstruct(const SeparatedPoint& pt, const SeparationConstants& c, const BodyParams& p) {
    return chart_to_state(reconstruct_chart(pt, c, p), 1e-9);
}

QuarticSpec oscillation_spec(int which, double s, const SeparationConstants& c, const BodyParams& p) {
    if (which != 1 && which != 2) throw ValidationError("coordinate index must be 1 or 2");
    const AdmissibleIntervals iv = admissible_intervals(c, p);
    const auto& list = which == 1 ? iv.s1 : iv.s2;
    const double tol = 1e-10 * std::max(1.0, std::abs(s));
    for (const Interval& comp : list) {
        if (!comp.contains(s, tol)) continue;
        if (!comp.bounded()) {
            std::ostringstream msg;
            msg << "s" << which << " component containing " << s << " is unbounded";
            throw ValidationError(msg.str());
        }
        return make_quartic(field_bound_for(which, p), c.m, c.l, comp.lo, comp.hi);
    }
    std::ostringstream msg;
    msg << "s" << which << " = " << s << " lies in no admissible interval";
    throw ValidationError(msg.str());
}

std::vector<SeparatedSample> integrate_separated(const SeparatedPoint& p0,
                                                 const SeparationConstants& c,
                                                 const BodyParams& p, double t_end,
                                                 double sample_dt,
                                                 const SeparatedTolerance& tol) {
    const AngleChart chart1 = make_angle_chart(oscillation_spec(1, p0.s1, c, p), p.a);
    const AngleChart chart2 = make_angle_chart(oscillation_spec(2, p0.s2, c, p), p.b);

    Sign eps1 = p0.eps1, sig1 = p0.sig1, eps2 = p0.eps2, sig2 = p0.sig2;
    const double s1_start = std::clamp(p0.s1, chart1.spec.lower, chart1.spec.upper);
    const double s2_start = std::clamp(p0.s2, chart2.spec.lower, chart2.spec.upper);
    normalize_start(chart1, s1_start, eps1, sig1);
    normalize_start(chart2, s2_start, eps2, sig2);
    const double u1_0 = start_angle(chart1, s1_start, to_int(eps1 * sig1));
    const double u2_0 = start_angle(chart2, s2_start, to_int(eps2 * sig2));

    std::vector<SeparatedSample> path;
    auto emit = [&](double t, double u1, double u2) {
        const CoordinateState c1 = chart1.half == 0.0 ? CoordinateState{chart1.mid, eps1, sig1}
                                                      : flags_after(chart1, u1_0, u1, eps1, sig1);
        const CoordinateState c2 = chart2.half == 0.0 ? CoordinateState{chart2.mid, eps2, sig2}
                                                      : flags_after(chart2, u2_0, u2, eps2, sig2);
        SeparatedSample smp;
        smp.t = t;
        smp.point = {c1.s, c2.s, c1.eps, c2.eps, c1.sig, c2.sig};
        if (chart1.half == 0.0) smp.point.s1 = p0.s1;
        if (chart2.half == 0.0) smp.point.s2 = p0.s2;
        path.push_back(smp);
    };

    if (chart1.half == 0.0 && chart2.half == 0.0) {
        // Both coordinates at rest: the constant path on the output grid.
        Dop853 dummy([](double, std::span<const double>, std::span<double> dy) { dy[0] = 0.0; }, 1,
                     tol.rel_tol, tol.abs_tol);
        const std::array<double, 1> y0{0.0};
        integrate_on_grid(dummy, 0.0, y0, t_end, sample_dt,
                          [&](double t, std::span<const double>) { emit(t, u1_0, u2_0); });
        return path;
    }

    Dop853 solver(
        [&](double, std::span<const double> y, std::span<double> dy) {
            dy[0] = chart1.rate(y[0]);
            dy[1] = chart2.rate(y[1]);
        },
        2, tol.rel_tol, tol.abs_tol);
    const std::array<double, 2> y0{u1_0, u2_0};
    integrate_on_grid(solver, 0.0, y0, t_end, sample_dt,
                      [&](double t, std::span<const double> y) { emit(t, y[0], y[1]); });
    return path;
}

double regularized_return_time(const QuarticSpec& spec, const SeparatedTolerance& tol) {
    if (spec.degenerate()) throw ValidationError("degenerate interval has no return time");
    const AngleChart chart = make_angle_chart(spec, 0.0);
    Dop853 solver([&](double, std::span<const double> y,
                      std::span<double> dy) { dy[0] = chart.rate(y[0]); },
                  1, tol.rel_tol, tol.abs_tol);
    const double u0 = -kPi / 2;
    const double target = u0 + 2.0 * kPi;
    const std::array<double, 1> y0{u0};
    solver.init(0.0, y0);
    for (std::size_t guard = 0; guard < 10000000; ++guard) {
        solver.step();
        if (solver.state()[0] < target) continue;
        // Root of u(t) = target inside the last step, on the dense output.
        double lo = solver.previous_time(), hi = solver.time();
        std::array<double, 1> buf{};
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
            const double mid = 0.5 * (lo + hi);
            solver.dense(mid, buf);
            if (buf[0] < target) lo = mid; else hi = mid;
        }
        return 0.5 * (lo + hi);
    }
    throw IntegrationError("regularized return time: no return within the step budget");
}

CrosscheckReport crosscheck(const SeparatedPoint& p0, const SeparationConstants& c,
                            const BodyParams& p, const CrosscheckConfig& cfg) {
    const PhaseState start = reconstruct(p0, c, p);
    IntegratorConfig icfg;
    icfg.rel_tol = cfg.rel_tol;
    icfg.abs_tol = cfg.abs_tol;
    icfg.t_end = cfg.t_end;
    icfg.sample_dt = cfg.sample_dt;
    const Trajectory full = integrate(start, icfg, p);
    const auto sep = integrate_separated(p0, c, p, cfg.t_end, cfg.sample_dt);
    if (sep.size() != full.states.size()) {
        throw IntegrationError("crosscheck: full and separated grids differ in length");
    }
    const double branch = p0.s1 < 0.0 ? -1.0 : 1.0;

    CrosscheckReport rep;
    rep.rows.reserve(sep.size());
    for (std::size_t k = 0; k < sep.size(); ++k) {
        const auto [f1, f2] = s_from_state(full.states[k], p);
        CrosscheckRow row{sep[k].t, branch * f1, sep[k].point.s1, branch * f2, sep[k].point.s2};
        rep.max_ds1 = std::max(rep.max_ds1, std::abs(row.s1_full - row.s1_sep));
        rep.max_ds2 = std::max(rep.max_ds2, std::abs(row.s2_full - row.s2_sep));
        const PhaseVector rec = to_vector(reconstruct(sep[k].point, c, p));
        const PhaseVector ful = to_vector(full.states[k]);
        for (int i = 0; i < 9; ++i) {
            rep.max_state_deviation = std::max(rep.max_state_deviation, std::abs(rec[i] - ful[i]));
        }
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace kovtop
