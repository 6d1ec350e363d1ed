#include "kovtop/statespace.hpp"

#include <numbers>
#include <sstream>

#include "kovtop/error.hpp"

namespace kovtop {

BodyParams make_params(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw ValidationError("field magnitudes must be finite");
    }
    if (b <= 0.0) {
        throw ValidationError("b must be positive (b = 0 is the classical single-field top)");
    }
    if (a <= b) {
        std::ostringstream msg;
        msg << "expected a > b, got a = " << a << ", b = " << b;
        throw ValidationError(msg.str());
    }
    return BodyParams{a, b, a * a + b * b, a * a - b * b};
}

PhaseVector to_vector(const PhaseState& s) {
    return {s.omega.x, s.omega.y, s.omega.z, s.alpha.x, s.alpha.y,
            s.alpha.z, s.beta.x,  s.beta.y,  s.beta.z};
}

PhaseState from_vector(const PhaseVector& v) {
    return {{v[0], v[1], v[2]}, {v[3], v[4], v[5]}, {v[6], v[7], v[8]}};
}

namespace {

Vec3 rotate_about_e3(Vec3 v, double c, double s) {
    return {c * v.x + s * v.y, -s * v.x + c * v.y, v.z};
}

}  // namespace

NormalizationReport normalize_fields(Vec3 omega, Vec3 alpha_raw, Vec3 beta_raw) {
    if (!is_finite(omega) || !is_finite(alpha_raw) || !is_finite(beta_raw)) {
        throw ValidationError("non-finite input to normalize_fields");
    }
    const double aa = dot(alpha_raw, alpha_raw);
    const double bb = dot(beta_raw, beta_raw);
    const double ab = dot(alpha_raw, beta_raw);
    if (aa == 0.0 && bb == 0.0) {
        throw ValidationError("both field vectors vanish");
    }

    // Branch (-pi/4, pi/4]; at alpha^2 = beta^2 the tangent is infinite and
    // the half-open convention picks +pi/4 for either sign of alpha.beta.
    const double diff = aa - bb;
    double theta = 0.0;
    if (ab != 0.0) {
        theta = diff == 0.0 ? std::numbers::pi / 4 : 0.5 * std::atan(2.0 * ab / diff);
    }

    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const Vec3 alpha_mixed = c * alpha_raw + s * beta_raw;
    const Vec3 beta_mixed = -s * alpha_raw + c * beta_raw;

    NormalizationReport out;
    out.theta = theta;
    out.state.omega = rotate_about_e3(omega, c, s);
    out.state.alpha = rotate_about_e3(alpha_mixed, c, s);
    out.state.beta = rotate_about_e3(beta_mixed, c, s);
    out.a = std::sqrt(dot(out.state.alpha, out.state.alpha));
    out.b = std::sqrt(dot(out.state.beta, out.state.beta));

    const double scale = std::sqrt(aa + bb);
    if (out.b <= 1e-12 * scale) {
        throw ValidationError(
            "normalized field beta vanishes (b = 0): the pair degenerates to the classical "
            "Kovalevskaya top in a single field, which is not modeled");
    }
    if (out.a < out.b) {
        throw ValidationError("normalized fields have |alpha| < |beta|; swap the roles of the fields");
    }
    if (out.a - out.b <= 1e-12 * scale) {
        throw ValidationError("normalized fields have equal magnitudes (a = b), which is not modeled");
    }
    return out;
}

CasimirResiduals casimir_residuals(const PhaseState& state, const BodyParams& params) {
    return {dot(state.alpha, state.alpha) - params.a * params.a,
            dot(state.beta, state.beta) - params.b * params.b, dot(state.alpha, state.beta)};
}

bool is_admissible(const PhaseState& state, const BodyParams& params, double rel_tol) {
    const auto res = casimir_residuals(state, params);
    const double scale = params.a * params.a;
    return std::abs(res.alpha_norm) <= rel_tol * scale &&
           std::abs(res.beta_norm) <= rel_tol * scale &&
           std::abs(res.cross) <= rel_tol * scale;
}

}  // namespace kovtop
