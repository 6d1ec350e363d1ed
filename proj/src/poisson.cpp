#include "kovtop/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "kovtop/detail/formulas.hpp"
#include "kovtop/error.hpp"

namespace kovtop {

using detail::Jet;
using detail::Phase;

namespace {

Phase<double> as_phase(const PhaseState& s) { return to_vector(s); }

Phase<Jet> as_jets(const PhaseState& s) {
    const auto v = to_vector(s);
    Phase<Jet> u;
    for (int i = 0; i < 9; ++i) u[i] = Jet::variable(v[i], i);
    return u;
}

template <typename Fn>
ScalarField make_field(std::string name, Fn fn) {
    ScalarField f;
    f.name = std::move(name);
    f.value = [fn](const PhaseState& s) { return fn(as_phase(s)); };
    f.gradient = [fn](const PhaseState& s) {
        const Jet j = fn(as_jets(s));
        return PhaseVector(j.d);
    };
    return f;
}

// d/dM_i from d/domega_i: omega1 = M1/2, omega2 = M2/2, omega3 = M3.
std::array<double, 9> to_momentum_gradient(const PhaseVector& g) {
    auto out = g;
    out[0] *= 0.5;
    out[1] *= 0.5;
    return out;
}

Vec3 part(const std::array<double, 9>& v, int offset) {
    return {v[offset], v[offset + 1], v[offset + 2]};
}

}  // namespace

MomentumChart to_momentum(const PhaseState& s) {
    return {{2.0 * s.omega.x, 2.0 * s.omega.y, s.omega.z}, s.alpha, s.beta};
}

PhaseState from_momentum(const MomentumChart& c) {
    return {{0.5 * c.momentum.x, 0.5 * c.momentum.y, c.momentum.z}, c.alpha, c.beta};
}

double integral_H(const PhaseState& s) { return detail::hamiltonian(as_phase(s)); }

double integral_K(const PhaseState& s) { return detail::kovalevskaya_k(as_phase(s)); }

AuxOmegas aux_omegas(const PhaseState& s) {
    const auto aux = detail::aux_omegas(as_phase(s));
    return {aux.alpha, aux.beta, aux.gamma};
}

double integral_G(const PhaseState& s, const BodyParams& p) {
    return detail::integral_g(as_phase(s), p);
}

IntegralValues integral_FML(const PhaseState& s, const BodyParams& p) {
    IntegralValues out;
    out.h = integral_H(s);
    out.k = integral_K(s);
    out.g = integral_G(s, p);
    const double q = 2.0 * out.g - p.p2 * out.h;
    out.f = q * q - p.r4() * out.k;
    out.m = q / p.r4();
    out.l_radicand = 2.0 * p.p2 * out.m * out.m + 2.0 * out.h * out.m + 1.0;
    if (out.l_radicand >= 0.0) out.l = std::sqrt(out.l_radicand);
    return out;
}

PhaseVector gradient(const ScalarField& f, const PhaseState& s) {
    if (f.gradient) return f.gradient(s);

    // Central differences in momentum coordinates, then back to omega.
    const MomentumChart base = to_momentum(s);
    std::array<double, 9> u = {base.momentum.x, base.momentum.y, base.momentum.z,
                               base.alpha.x,    base.alpha.y,    base.alpha.z,
                               base.beta.x,     base.beta.y,     base.beta.z};
    auto state_at = [](const std::array<double, 9>& v) {
        return from_momentum({part(v, 0), part(v, 3), part(v, 6)});
    };
    PhaseVector grad_u{};
    for (int i = 0; i < 9; ++i) {
        const double h = 1e-6 * std::max(1.0, std::abs(u[i]));
        auto plus = u;
        auto minus = u;
        plus[i] += h;
        minus[i] -= h;
        grad_u[i] = (f.value(state_at(plus)) - f.value(state_at(minus))) / (2.0 * h);
    }
    grad_u[0] *= 2.0;
    grad_u[1] *= 2.0;
    return grad_u;
}

double lie_poisson_bracket(const ScalarField& f, const ScalarField& g, const PhaseState& s) {
    const auto df = to_momentum_gradient(gradient(f, s));
    const auto dg = to_momentum_gradient(gradient(g, s));
    for (int i = 0; i < 9; ++i) {
        if (!std::isfinite(df[i]) || !std::isfinite(dg[i])) {
            throw DomainError("non-finite gradient in Lie-Poisson bracket (" + f.name + ", " +
                              g.name + ")");
        }
    }
    const MomentumChart c = to_momentum(s);
    const Vec3 fm = part(df, 0), fa = part(df, 3), fb = part(df, 6);
    const Vec3 gm = part(dg, 0), ga = part(dg, 3), gb = part(dg, 6);
    return -dot(c.momentum, cross(fm, gm)) - dot(c.alpha, cross(fm, ga) + cross(fa, gm)) -
           dot(c.beta, cross(fm, gb) + cross(fb, gm));
}

PhaseTangent hamiltonian_field(const PhaseState& s) {
    // {u, H} with dH/dM = omega, dH/dalpha = -e1, dH/dbeta = -e2.
    const MomentumChart c = to_momentum(s);
    const Vec3 omega = s.omega;
    const Vec3 e1{1.0, 0.0, 0.0};
    const Vec3 e2{0.0, 1.0, 0.0};
    const Vec3 momentum_dot = cross(c.momentum, omega) + cross(e1, c.alpha) + cross(e2, c.beta);
    PhaseTangent out;
    out.omega = {0.5 * momentum_dot.x, 0.5 * momentum_dot.y, momentum_dot.z};
    out.alpha = cross(c.alpha, omega);
    out.beta = cross(c.beta, omega);
    return out;
}

ScalarField field_H() {
    return make_field("H", [](const auto& u) { return detail::hamiltonian(u); });
}

ScalarField field_K() {
    return make_field("K", [](const auto& u) { return detail::kovalevskaya_k(u); });
}

ScalarField field_G(const BodyParams& p) {
    return make_field("G", [p](const auto& u) { return detail::integral_g(u, p); });
}

ScalarField field_F(const BodyParams& p) {
    return make_field("F", [p](const auto& u) { return detail::integral_f(u, p); });
}

ScalarField field_M(const BodyParams& p) {
    return make_field("M", [p](const auto& u) { return detail::integral_m(u, p); });
}

ScalarField field_L(const BodyParams& p) {
    return make_field("L", [p](const auto& u) {
        using std::sqrt;
        const auto rad = detail::l_radicand(u, p);
        if (detail::value_of(rad) < 0.0) {
            return rad * std::numeric_limits<double>::quiet_NaN();
        }
        return sqrt(rad);
    });
}

ScalarField field_alpha_norm() {
    return make_field("|alpha|^2",
                      [](const auto& u) { return u[3] * u[3] + u[4] * u[4] + u[5] * u[5]; });
}

ScalarField field_beta_norm() {
    return make_field("|beta|^2",
                      [](const auto& u) { return u[6] * u[6] + u[7] * u[7] + u[8] * u[8]; });
}

ScalarField field_alpha_beta() {
    return make_field("alpha.beta",
                      [](const auto& u) { return u[3] * u[6] + u[4] * u[7] + u[5] * u[8]; });
}

}  // namespace kovtop
