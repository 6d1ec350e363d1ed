#include "kovtop/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kovtop/detail/formulas.hpp"
#include "kovtop/error.hpp"

namespace kovtop {

using detail::Jet;

namespace {

cplx to_std(const detail::Complex<double>& z) { return {z.re, z.im}; }

detail::Complex<double> from_std(cplx z) { return {z.real(), z.imag()}; }

detail::Chart<double> to_detail(const ComplexChart& c) {
    detail::Chart<double> d;
    d.x1 = from_std(c.x1);
    d.x2 = from_std(c.x2);
    d.y1 = from_std(c.y1);
    d.y2 = from_std(c.y2);
    d.z1 = from_std(c.z1);
    d.z2 = from_std(c.z2);
    d.w1 = from_std(c.w1);
    d.w2 = from_std(c.w2);
    d.w3 = c.w3;
    return d;
}

double chart_scale(const ComplexChart& c) {
    return std::max({1.0, std::abs(c.x1), std::abs(c.y1), std::abs(c.z1)});
}

void require_domain(double x1x2, double eps_domain, double scale) {
    if (!(std::abs(x1x2) >= eps_domain * scale * scale)) {
        std::ostringstream msg;
        msg << "x1 x2 = " << x1x2 << " is outside the chart domain x1 x2 != 0";
        throw DomainError(msg.str());
    }
}

template <typename Part>
ScalarField chart_field(std::string name, Part part) {
    ScalarField f;
    f.name = std::move(name);
    f.value = [part](const PhaseState& s) {
        return part(detail::make_chart(detail::Phase<double>(to_vector(s)))).re;
    };
    f.gradient = [part](const PhaseState& s) {
        const auto v = to_vector(s);
        detail::Phase<Jet> u;
        for (int i = 0; i < 9; ++i) u[i] = Jet::variable(v[i], i);
        return PhaseVector(part(detail::make_chart(u)).re.d);
    };
    return f;
}

}  // namespace

ComplexChart state_to_chart(const PhaseState& s) {
    const auto d = detail::make_chart(detail::Phase<double>(to_vector(s)));
    return {to_std(d.x1), to_std(d.x2), to_std(d.y1), to_std(d.y2), to_std(d.z1),
            to_std(d.z2), to_std(d.w1), to_std(d.w2), d.w3};
}

PhaseState chart_to_state(const ComplexChart& c, double tol) {
    const double scale = std::max({1.0, std::abs(c.x1), std::abs(c.y1), std::abs(c.z1),
                                   std::abs(c.w1), std::abs(c.w3)});
    auto check = [&](cplx a, cplx b, const char* name) {
        if (std::abs(b - std::conj(a)) > tol * scale) {
            throw DomainError(std::string("chart is not realizable: ") + name +
                              "2 is not the conjugate of " + name + "1");
        }
    };
    check(c.x1, c.x2, "x");
    check(c.y1, c.y2, "y");
    check(c.z1, c.z2, "z");
    check(c.w1, c.w2, "w");

    const cplx sum = 0.5 * (c.x1 + c.y1);   // alpha1 + i alpha2
    const cplx diff = 0.5 * (c.y1 - c.x1);  // beta2 - i beta1
    PhaseState s;
    s.alpha = {sum.real(), sum.imag(), c.z1.real()};
    s.beta = {-diff.imag(), diff.real(), c.z1.imag()};
    s.omega = {c.w1.real(), c.w1.imag(), c.w3};
    return s;
}

F1F2 F1_F2(const ComplexChart& c, double eps_domain) {
    const auto d = to_detail(c);
    require_domain(detail::chart_x1x2(d), eps_domain, chart_scale(c));
    return {to_std(detail::f1_value(d)), to_std(detail::f2_value(d))};
}

MembershipReport on_N(const PhaseState& s, const BodyParams& p, const ManifoldTolerance& tol) {
    const auto f12 = F1_F2(state_to_chart(s), tol.eps_domain);
    const IntegralValues iv = integral_FML(s, p);
    MembershipReport out;
    out.abs_f1 = std::abs(f12.f1);
    out.abs_f2 = std::abs(f12.f2);
    // F is quadratic in the integrals; compare it on the scale of its terms.
    const double q = 2.0 * iv.g - p.p2 * iv.h;
    const double f_scale = std::max({1.0, q * q, p.r4() * iv.k});
    out.abs_f = std::abs(iv.f) / f_scale;
    out.member = out.abs_f1 <= tol.eps_f1 && out.abs_f2 <= tol.eps_f2 && out.abs_f <= tol.eps_f;
    out.l = iv.l;
    out.degenerate = !iv.l || *iv.l <= tol.eps_f;
    return out;
}

ChartConstraintResiduals constraint_residuals_chart(const ComplexChart& c, const BodyParams& p) {
    ChartConstraintResiduals r;
    r.first = c.z1 * c.z1 + c.x1 * c.y2 - p.r2;
    r.second = c.z2 * c.z2 + c.x2 * c.y1 - p.r2;
    r.third = (c.x1 * c.x2 + c.y1 * c.y2 + 2.0 * c.z1 * c.z2).real() - 2.0 * p.p2;
    return r;
}

ScalarField field_F1() {
    return chart_field("F1", [](const auto& c) { return detail::f1_value(c); });
}

ScalarField field_F2() {
    return chart_field("F2", [](const auto& c) { return detail::f2_value(c); });
}

double bracket_ratio(const PhaseState& s, const BodyParams& p, double eps) {
    const ComplexChart c = state_to_chart(s);
    require_domain((c.x1 * c.x2).real(), 1e-10, chart_scale(c));
    const IntegralValues iv = integral_FML(s, p);
    if (!iv.l) throw DomainError("L is undefined at this point (negative radicand)");
    if (*iv.l < eps) throw DomainError("L vanishes at this point; the ratio is undefined");
    return lie_poisson_bracket(field_F2(), field_F1(), s) / (p.r2 * *iv.l);
}

double f1f2_min_singular_value(const PhaseState& s) {
    const PhaseVector g1 = gradient(field_F1(), s);
    const PhaseVector g2 = gradient(field_F2(), s);
    double a = 0.0, b = 0.0, d = 0.0;
    for (int i = 0; i < 9; ++i) {
        a += g1[i] * g1[i];
        b += g1[i] * g2[i];
        d += g2[i] * g2[i];
    }
    // Smallest eigenvalue of the 2x2 Gram matrix [[a, b], [b, d]].
    const double mean = 0.5 * (a + d);
    const double disc = std::sqrt(std::max(0.0, 0.25 * (a - d) * (a - d) + b * b));
    const double det = a * d - b * b;
    const double big = mean + disc;
    const double small = big > 0.0 ? std::max(0.0, det / big) : 0.0;
    return std::sqrt(small);
}

}  // namespace kovtop
