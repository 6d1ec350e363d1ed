#include <cmath>
#include <vector>

#include "doctest.h"
#include "kovtop/error.hpp"
#include "kovtop/ode.hpp"

using namespace kovtop;
using doctest::Approx;

namespace {

void oscillator(double, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
}

}  // namespace

TEST_CASE("harmonic oscillator over ten periods") {
    Dop853 solver(oscillator, 2, 1e-12, 1e-14);
    const std::array<double, 2> y0{1.0, 0.0};
    double err = 0.0;
    integrate_on_grid(solver, 0.0, y0, 20 * M_PI, 0.5, [&](double t, std::span<const double> y) {
        err = std::max({err, std::abs(y[0] - std::cos(t)), std::abs(y[1] + std::sin(t))});
    });
    CHECK(err < 1e-10);
}

TEST_CASE("grid includes the end point exactly once") {
    Dop853 solver([](double, std::span<const double>, std::span<double> dy) { dy[0] = 1.0; }, 1, 1e-10, 1e-12);
    std::vector<double> ts;
    const std::array<double, 1> y0{0.0};
    integrate_on_grid(solver, 0.0, y0, 1.05, 0.1, [&](double t, std::span<const double> y) {
        ts.push_back(t);
        CHECK(y[0] == Approx(t).epsilon(1e-12));
    });
    REQUIRE(ts.size() == 12);
    CHECK(ts.front() == 0.0);
    CHECK(ts.back() == 1.05);
}

TEST_CASE("zero-length run yields the initial point") {
    Dop853 solver(oscillator, 2, 1e-10, 1e-12);
    int n = 0;
    const std::array<double, 2> y0{1.0, 0.0};
    integrate_on_grid(solver, 0.0, y0, 0.0, 0.1, [&](double t, std::span<const double> y) {
        ++n;
        CHECK(t == 0.0);
        CHECK(y[0] == 1.0);
    });
    CHECK(n == 1);
}

TEST_CASE("dense output inside a step") {
    Dop853 solver([](double, std::span<const double> y, std::span<double> dy) { dy[0] = y[0]; }, 1, 1e-12, 1e-14);
    const std::array<double, 1> y0{1.0};
    solver.init(0.0, y0);
    for (int i = 0; i < 5; ++i) {
        solver.step();
        const double t0 = solver.previous_time(), t1 = solver.time();
        std::array<double, 1> out{};
        for (double f : {0.25, 0.5, 0.75}) {
            const double t = t0 + f * (t1 - t0);
            solver.dense(t, out);
            CHECK(out[0] == Approx(std::exp(t)).epsilon(1e-9));
        }
    }
}

TEST_CASE("backward integration") {
    Dop853 solver([](double, std::span<const double> y, std::span<double> dy) { dy[0] = -y[0]; }, 1, 1e-12, 1e-14);
    const std::array<double, 1> y0{1.0};
    solver.init(0.0, y0, -1.0);
    while (solver.time() > -2.0) solver.step();
    std::array<double, 1> out{};
    solver.dense(-2.0, out);
    CHECK(out[0] == Approx(std::exp(2.0)).epsilon(1e-10));
}

TEST_CASE("error decreases with tolerance") {
    auto run = [](double tol) {
        Dop853 solver(oscillator, 2, tol, tol * 1e-2);
        const std::array<double, 2> y0{1.0, 0.0};
        double err = 0.0;
        integrate_on_grid(solver, 0.0, y0, 10.0, 10.0, [&](double t, std::span<const double> y) {
            err = std::max(err, std::abs(y[0] - std::cos(t)));
        });
        return err;
    };
    CHECK(run(1e-11) < run(1e-6));
}

TEST_CASE("non-finite state raises") {
    Dop853 solver([](double, std::span<const double> y, std::span<double> dy) { dy[0] = y[0] * y[0]; }, 1, 1e-10, 1e-12);
    const std::array<double, 1> y0{1.0};
    solver.init(0.0, y0);
    // Blow-up at t = 1.
    CHECK_THROWS_AS(
        [&] {
            for (int i = 0; i < 100000; ++i) solver.step();
        }(),
        IntegrationError);
}
