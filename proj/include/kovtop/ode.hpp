#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace kovtop {

/// Right-hand side dy/dt = f(t, y).
using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

/// Dormand-Prince 8(5,3) explicit Runge-Kutta with step-size control and a
/// continuous (dense) extension of order 6 built from the main stages.
/// Integrates forward or backward depending on the sign of `direction`.
class Dop853 {
public:
    Dop853(OdeRhs rhs, std::size_t dim, double rel_tol, double abs_tol, double max_step = 0.0);

    void init(double t0, std::span<const double> y0, double direction = 1.0);

    /// Takes one accepted step and returns its (signed) length.
    /// Throws IntegrationError on step-size underflow or a non-finite state.
    double step();

    double time() const { return t_; }
    double previous_time() const { return t_prev_; }
    std::span<const double> state() const { return y_; }
    std::size_t steps_taken() const { return accepted_; }

    /// Dense output on [previous_time(), time()].
    void dense(double t, std::span<double> out) const;

private:
    double initial_step() const;

    OdeRhs rhs_;
    std::size_t n_;
    double rtol_;
    double atol_;
    double hmax_;
    double dir_ = 1.0;
    double t_ = 0.0;
    double t_prev_ = 0.0;
    double h_ = 0.0;
    std::size_t accepted_ = 0;
    std::vector<double> y_, ytmp_, ynew_;
    std::vector<double> k1_, k2_, k3_, k4_, k5_, k6_, k7_, k8_, k9_, k10_;
    std::vector<double> r1_, r2_, r3_, r4_, r5_, r6_, r7_, r8_;
};

/// Integrates from t0 to t_end and reports the solution on the grid
/// t0, t0 + dt, ..., always including t_end itself. `sink` is called once per
/// grid point in order.
void integrate_on_grid(Dop853& solver, double t0, std::span<const double> y0, double t_end,
                       double dt,
                       const std::function<void(double, std::span<const double>)>& sink);

}  // namespace kovtop
