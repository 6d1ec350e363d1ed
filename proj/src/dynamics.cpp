#include "kovtop/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kovtop/error.hpp"
#include "kovtop/ode.hpp"
#include "kovtop/poisson.hpp"

namespace kovtop {

PhaseTangent euler_poisson_rhs(const PhaseState& s) {
    const Vec3& w = s.omega;
    const Vec3& al = s.alpha;
    const Vec3& be = s.beta;
    PhaseTangent d;
    d.omega = {0.5 * (w.y * w.z + be.z), 0.5 * (-w.x * w.z - al.z), al.y - be.x};
    d.alpha = cross(al, w);
    d.beta = cross(be, w);
    return d;
}

KovalevskayaIdentity time_derivative_identities(const PhaseState& s) {
    const PhaseTangent d = euler_poisson_rhs(s);
    const Vec3& w = s.omega;
    const double z1 = w.x * w.x - w.y * w.y + s.alpha.x - s.beta.y;
    const double z2 = 2.0 * w.x * w.y + s.alpha.y + s.beta.x;
    const double z1_dot = 2.0 * w.x * d.omega.x - 2.0 * w.y * d.omega.y + d.alpha.x - d.beta.y;
    const double z2_dot = 2.0 * (d.omega.x * w.y + w.x * d.omega.y) + d.alpha.y + d.beta.x;
    return {z1_dot - w.z * z2, z2_dot + w.z * z1};
}

double DriftReport::max_integral() const { return std::max({h, k, g, f, m}); }

double DriftReport::max_casimir() const {
    return std::max({casimir_alpha, casimir_beta, casimir_cross});
}

namespace {

double relative_change(double value, double initial) {
    return std::abs(value - initial) / std::max(1.0, std::abs(initial));
}

}  // namespace

Trajectory integrate(const PhaseState& state0, const IntegratorConfig& cfg,
                     const BodyParams& params) {
    if (!(cfg.sample_dt > 0.0)) throw ValidationError("sample_dt must be positive");
    if (!(cfg.t_end >= 0.0)) throw ValidationError("t_end must be nonnegative");
    if (!is_admissible(state0, params)) {
        const auto r = casimir_residuals(state0, params);
        std::ostringstream msg;
        msg << "initial state violates the field constraints: |alpha|^2-a^2 = " << r.alpha_norm
            << ", |beta|^2-b^2 = " << r.beta_norm << ", alpha.beta = " << r.cross;
        throw ValidationError(msg.str());
    }

    Dop853 solver(
        [](double, std::span<const double> y, std::span<double> dy) {
            PhaseVector v;
            std::copy(y.begin(), y.end(), v.begin());
            const auto d = to_vector(euler_poisson_rhs(from_vector(v)));
            std::copy(d.begin(), d.end(), dy.begin());
        },
        9, cfg.rel_tol, cfg.abs_tol, cfg.max_step);

    Trajectory traj;
    const IntegralValues ref = integral_FML(state0, params);
    const CasimirResiduals cas0 = casimir_residuals(state0, params);
    DriftReport& drift = traj.drift;
    drift.l_defined = ref.l.has_value();

    const double expected = std::max(cfg.rel_tol, cfg.abs_tol) * std::max(1.0, cfg.t_end);
    const auto y0 = to_vector(state0);
    integrate_on_grid(solver, 0.0, y0, cfg.t_end, cfg.sample_dt,
                      [&](double t, std::span<const double> y) {
                          PhaseVector v;
                          std::copy(y.begin(), y.end(), v.begin());
                          const PhaseState s = from_vector(v);
                          traj.times.push_back(t);
                          traj.states.push_back(s);

                          const IntegralValues iv = integral_FML(s, params);
                          drift.h = std::max(drift.h, relative_change(iv.h, ref.h));
                          drift.k = std::max(drift.k, relative_change(iv.k, ref.k));
                          drift.g = std::max(drift.g, relative_change(iv.g, ref.g));
                          drift.f = std::max(drift.f, relative_change(iv.f, ref.f));
                          drift.m = std::max(drift.m, relative_change(iv.m, ref.m));
                          if (iv.l && ref.l) {
                              drift.l = std::max(drift.l, relative_change(*iv.l, *ref.l));
                          } else {
                              drift.l_defined = false;
                          }
                          const CasimirResiduals c = casimir_residuals(s, params);
                          drift.casimir_alpha =
                              std::max(drift.casimir_alpha, std::abs(c.alpha_norm - cas0.alpha_norm));
                          drift.casimir_beta =
                              std::max(drift.casimir_beta, std::abs(c.beta_norm - cas0.beta_norm));
                          drift.casimir_cross =
                              std::max(drift.casimir_cross, std::abs(c.cross - cas0.cross));

                          const double worst = std::max({drift.h, drift.k, drift.g});
                          if (worst > 1e3 * expected) {
                              std::ostringstream msg;
                              msg << "integral drift " << worst << " at t = " << t
                                  << " exceeds 1e3 x expected level " << expected;
                              throw IntegrationError(msg.str());
                          }
                      });
    if (!drift.l_defined) drift.l = 0.0;
    traj.steps = solver.steps_taken();
    return traj;
}

}  // namespace kovtop
