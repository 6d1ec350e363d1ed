#pragma once

#include <array>
#include <cmath>

namespace kovtop {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

    friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend constexpr Vec3 operator*(double s, Vec3 v) { return {s * v.x, s * v.y, s * v.z}; }
    friend constexpr bool operator==(Vec3, Vec3) = default;
};

constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline bool is_finite(Vec3 v) {
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

/// Field magnitudes a = |alpha|, b = |beta| with a > b > 0, and the derived
/// constants p2 = a^2 + b^2, r2 = a^2 - b^2.
struct BodyParams {
    double a = 0.0;
    double b = 0.0;
    double p2 = 0.0;
    double r2 = 0.0;

    double r() const { return std::sqrt(r2); }
    double r4() const { return r2 * r2; }
};

/// Validated constructor. Throws ValidationError unless a > b > 0.
BodyParams make_params(double a, double b);

/// Body-frame phase point: angular velocity and the two field vectors.
struct PhaseState {
    Vec3 omega;
    Vec3 alpha;
    Vec3 beta;

    friend constexpr bool operator==(const PhaseState&, const PhaseState&) = default;
};

/// Flat layout (omega1..3, alpha1..3, beta1..3), used by the integrators and
/// the bracket engine.
using PhaseVector = std::array<double, 9>;

PhaseVector to_vector(const PhaseState& s);
PhaseState from_vector(const PhaseVector& v);

/// Time derivative of a PhaseState; same layout, different meaning.
using PhaseTangent = PhaseState;

struct NormalizationReport {
    double theta = 0.0;
    PhaseState state;
    double a = 0.0;
    double b = 0.0;
};

/// Rotates the pair (e1, e2) in the equatorial plane so that the field
/// vectors become orthogonal while the potential -alpha1 - beta2 is kept.
///
/// theta solves tan 2theta = 2 alpha.beta / (alpha^2 - beta^2) on the branch
/// (-pi/4, pi/4]. The new fields are alpha' = cos*alpha + sin*beta,
/// beta' = -sin*alpha + cos*beta, and every body vector is then expressed in
/// the frame turned by theta about the third axis.
///
/// Throws ValidationError when the result has b = 0 (fields were parallel
/// with equal norms, the classical Kovalevskaya degeneration), when both
/// inputs vanish, or when the rotated pair has |alpha| < |beta|.
NormalizationReport normalize_fields(Vec3 omega, Vec3 alpha_raw, Vec3 beta_raw);

struct CasimirResiduals {
    double alpha_norm;  // |alpha|^2 - a^2
    double beta_norm;   // |beta|^2 - b^2
    double cross;       // alpha . beta
};

CasimirResiduals casimir_residuals(const PhaseState& state, const BodyParams& params);

/// True when all Casimir residuals are within `rel_tol` relative to a^2.
bool is_admissible(const PhaseState& state, const BodyParams& params, double rel_tol = 1e-8);

/// Potential energy -alpha1 - beta2.
inline double potential(const PhaseState& s) { return -s.alpha.x - s.beta.y; }

}  // namespace kovtop
