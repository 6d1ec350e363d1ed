#include <cmath>

#include "doctest.h"
#include "kovtop/dynamics.hpp"
#include "kovtop/error.hpp"
#include "kovtop/poisson.hpp"
#include "kovtop/sampling.hpp"

using namespace kovtop;
using doctest::Approx;

namespace {
const PhaseState kEquilibrium{{0, 0, 0}, {2, 0, 0}, {0, 1, 0}};
}

TEST_CASE("right-hand side examples") {
    CHECK(to_vector(euler_poisson_rhs(kEquilibrium)) == PhaseVector{});
    CHECK(to_vector(euler_poisson_rhs({{0, 0, 1}, {}, {}})) == PhaseVector{});
    CHECK(to_vector(euler_poisson_rhs({{0, 0, 0}, {0, 1, 0}, {1, 0, 0}})) == PhaseVector{});
    const PhaseTangent d = euler_poisson_rhs({{0, 0, 0}, {0, 0, 2}, {}});
    CHECK(2 * d.omega.y == -2.0);
}

TEST_CASE("rhs conserves H, K, G to first order") {
    // dI/dt = grad I . rhs, with grad I by central differences.
    const BodyParams p = make_params(2, 1);
    Rng rng(41);
    for (int i = 0; i < 10; ++i) {
        const PhaseState s = random_admissible_state(rng, p);
        const PhaseVector v = to_vector(s), d = to_vector(euler_poisson_rhs(s));
        for (auto I : {+[](const PhaseState& x, const BodyParams&) { return integral_H(x); },
                       +[](const PhaseState& x, const BodyParams&) { return integral_K(x); },
                       +[](const PhaseState& x, const BodyParams& q) { return integral_G(x, q); }}) {
            const double h = 1e-6;
            PhaseVector up = v, dn = v;
            for (int k = 0; k < 9; ++k) {
                up[k] += h * d[k];
                dn[k] -= h * d[k];
            }
            const double rate = (I(from_vector(up), p) - I(from_vector(dn), p)) / (2 * h);
            CHECK(std::abs(rate) < 1e-6);
        }
    }
}

TEST_CASE("equilibrium run is constant") {
    const BodyParams p = make_params(2, 1);
    IntegratorConfig cfg;
    cfg.t_end = 10;
    const Trajectory tr = integrate(kEquilibrium, cfg, p);
    REQUIRE(tr.states.size() == 101);
    for (const auto& s : tr.states) CHECK(to_vector(s) == to_vector(kEquilibrium));
    CHECK(tr.drift.max_integral() == 0.0);
    CHECK(tr.drift.max_casimir() == 0.0);
}

TEST_CASE("perturbed equilibrium conserves the integrals") {
    const BodyParams p = make_params(2, 1);
    IntegratorConfig cfg;
    cfg.t_end = 50;
    PhaseState s = kEquilibrium;
    s.omega.x = 0.1;
    const Trajectory tr = integrate(s, cfg, p);
    CHECK(tr.drift.h < 1e-8);
    CHECK(tr.drift.k < 1e-8);
    CHECK(tr.drift.g < 1e-8);
    CHECK(tr.drift.casimir_cross < 1e-10);
}

TEST_CASE("random runs conserve integrals and casimirs") {
    const BodyParams p = make_params(2, 1);
    Rng rng(43);
    IntegratorConfig cfg;
    cfg.t_end = 20;
    for (int i = 0; i < 5; ++i) {
        const PhaseState s0 = random_admissible_state(rng, p);
        const Trajectory tr = integrate(s0, cfg, p);
        CHECK(tr.drift.max_integral() < 1e-7);
        // Default tolerances leave the Casimirs at the 1e-9 level.
        CHECK(tr.drift.max_casimir() < 1e-8);

        IntegratorConfig tight = cfg;
        tight.rel_tol = 1e-12;
        tight.abs_tol = 1e-14;
        const Trajectory tt = integrate(s0, tight, p);
        CHECK(tt.drift.max_casimir() < 1e-10);
        CHECK(tt.drift.max_casimir() < tr.drift.max_casimir());
    }
}

TEST_CASE("integrate validates its input") {
    const BodyParams p = make_params(2, 1);
    IntegratorConfig cfg;
    CHECK_THROWS_AS(integrate({{0, 0, 0}, {2, 0, 0}, {0, 1, 0.1}}, cfg, p), ValidationError);
    cfg.t_end = -1;
    CHECK_THROWS_AS(integrate(kEquilibrium, cfg, p), ValidationError);
    cfg.t_end = 1;
    cfg.sample_dt = 0;
    CHECK_THROWS_AS(integrate(kEquilibrium, cfg, p), ValidationError);
}

TEST_CASE("Kovalevskaya-type identities") {
    const BodyParams p = make_params(2, 1);
    auto id = time_derivative_identities(kEquilibrium);
    CHECK(id.real_part == 0.0);
    CHECK(id.imag_part == 0.0);
    id = time_derivative_identities({{0, 0, 3}, {}, {}});
    CHECK(id.real_part == 0.0);
    CHECK(id.imag_part == 0.0);
    Rng rng(47);
    for (int i = 0; i < 20; ++i) {
        id = time_derivative_identities(random_admissible_state(rng, p));
        CHECK(std::abs(id.real_part) < 1e-12);
        CHECK(std::abs(id.imag_part) < 1e-12);
    }
}
