#include <array>
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

int eps(int i, int j, int k) {
    if (i == j || j == k || i == k) return 0;
    return ((j - i + 3) % 3 == 1) ? 1 : -1;
}

// Momentum coordinates u = (M, alpha, beta), M = (2 w1, 2 w2, w3).
std::array<double, 9> to_u(const PhaseState& s) {
    return {2 * s.omega.x, 2 * s.omega.y, s.omega.z, s.alpha.x, s.alpha.y, s.alpha.z,
            s.beta.x,      s.beta.y,      s.beta.z};
}

PhaseState from_u(const std::array<double, 9>& u) {
    return {{u[0] / 2, u[1] / 2, u[2]}, {u[3], u[4], u[5]}, {u[6], u[7], u[8]}};
}

// Bracket from the explicit 9x9 structure matrix with finite-difference
// gradients in u; independent of the library's vector formula.
template <typename F, typename G>
double oracle_bracket(F f, G g, const PhaseState& s) {
    const auto u = to_u(s);
    std::array<double, 9> df{}, dg{};
    for (int i = 0; i < 9; ++i) {
        const double h = 1e-5 * std::max(1.0, std::abs(u[i]));
        auto up = u, dn = u;
        up[i] += h;
        dn[i] -= h;
        df[i] = (f(from_u(up)) - f(from_u(dn))) / (2 * h);
        dg[i] = (g(from_u(up)) - g(from_u(dn))) / (2 * h);
    }
    double J[9][9] = {};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            for (int k = 0; k < 3; ++k) {
                const int e = eps(i, j, k);
                J[i][j] += -e * u[k];
                J[i][3 + j] += -e * u[3 + k];
                J[3 + i][j] += -e * u[3 + k];
                J[i][6 + j] += -e * u[6 + k];
                J[6 + i][j] += -e * u[6 + k];
            }
        }
    }
    double out = 0;
    for (int i = 0; i < 9; ++i) {
        for (int j = 0; j < 9; ++j) out += df[i] * J[i][j] * dg[j];
    }
    return out;
}

ScalarField momentum_component(int i) {
    ScalarField f;
    f.name = "M" + std::to_string(i + 1);
    f.value = [i](const PhaseState& s) { return to_u(s)[i]; };
    return f;
}

}  // namespace

TEST_CASE("integrals at the equilibrium example") {
    const BodyParams p = make_params(2, 1);
    CHECK(integral_H(kEquilibrium) == -3.0);
    CHECK(integral_K(kEquilibrium) == 1.0);
    CHECK(integral_G(kEquilibrium, p) == -6.0);
    const IntegralValues iv = integral_FML(kEquilibrium, p);
    CHECK(iv.f == Approx(0.0));
    CHECK(iv.m == Approx(1.0 / 3).epsilon(1e-15));
    REQUIRE(iv.l);
    CHECK(*iv.l == Approx(1.0 / 3).epsilon(1e-15));
    // H = (l^2 - 1 - 2 p^2 m^2) / (2m) on this level.
    CHECK((*iv.l * *iv.l - 1 - 2 * p.p2 * iv.m * iv.m) / (2 * iv.m) == Approx(-3.0));
}

TEST_CASE("H examples") {
    CHECK(integral_H({{0, 0, 2}, {}, {}}) == 2.0);
    CHECK(integral_H({{1, 1, 0}, {0, 2, 0}, {1, 0, 0}}) == 2.0);
}

TEST_CASE("K examples") {
    CHECK(integral_K({{0, 0, 0}, {0, 0, 2}, {0, 0, 1}}) == 0.0);
    CHECK(integral_K({{1, 0, 0}, {2, 0, 0}, {0, 1, 0}}) == 4.0);
}

TEST_CASE("auxiliary omegas") {
    auto w = aux_omegas({{0, 0, 0}, {0.3, -1, 2}, {1, 0.5, 0.2}});
    CHECK(w.alpha == 0.0);
    CHECK(w.beta == 0.0);
    CHECK(w.gamma == 0.0);
    w = aux_omegas({{0, 0, 1}, {2, 0, 0}, {0, 1, 0}});
    CHECK(w.alpha == 0.0);
    CHECK(w.beta == 0.0);
    CHECK(w.gamma == 2.0);
    w = aux_omegas({{1, 0, 0}, {2, 0, 0}, {0, 1, 0}});
    CHECK(w.alpha == 4.0);
    CHECK(w.beta == 0.0);
    CHECK(w.gamma == 0.0);
}

TEST_CASE("G examples") {
    const BodyParams p = make_params(2, 1);
    CHECK(integral_G({{0, 0, 1}, {2, 0, 0}, {0, 1, 0}}, p) == -5.0);
    CHECK(integral_G({{0, 0, 0}, {0, 1, 0}, {1, 0, 0}}, p) == 0.0);
}

TEST_CASE("F and M are consistent with H, K, G on random states") {
    const BodyParams p = make_params(2, 1);
    Rng rng(11);
    for (int i = 0; i < 20; ++i) {
        const PhaseState s = random_admissible_state(rng, p);
        const IntegralValues iv = integral_FML(s, p);
        const double q = 2 * iv.g - p.p2 * iv.h;
        CHECK(iv.f == Approx(q * q - p.r4() * iv.k).epsilon(1e-12));
        CHECK(iv.m == Approx(q / p.r4()).epsilon(1e-12));
        CHECK(iv.k >= 0.0);
        if (iv.l) CHECK(*iv.l >= 0.0);
    }
}

TEST_CASE("states with K = 0 and 2G = p^2 H give F = M = 0") {
    const BodyParams p = make_params(2, 1);
    const IntegralValues iv = integral_FML({}, p);
    CHECK(iv.f == 0.0);
    CHECK(iv.m == 0.0);
}

TEST_CASE("basic brackets") {
    PhaseState s;
    s.omega = {0, 0, 1};  // M = (0, 0, 1)
    CHECK(lie_poisson_bracket(momentum_component(0), momentum_component(1), s) == Approx(-1.0));
    CHECK(lie_poisson_bracket(momentum_component(1), momentum_component(0), s) == Approx(1.0));
}

TEST_CASE("casimirs commute with everything") {
    const BodyParams p = make_params(2, 1);
    Rng rng(3);
    for (int i = 0; i < 10; ++i) {
        const PhaseState s = random_admissible_state(rng, p);
        for (const auto& c : {field_alpha_norm(), field_beta_norm(), field_alpha_beta()}) {
            for (const auto& f : {field_H(), field_K(), field_G(p), momentum_component(0), momentum_component(2)}) {
                CHECK(std::abs(lie_poisson_bracket(c, f, s)) < 1e-12);
            }
        }
    }
}

TEST_CASE("H, K, G are in involution") {
    const BodyParams p = make_params(2, 1);
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        const PhaseState s = random_admissible_state(rng, p);
        CHECK(std::abs(lie_poisson_bracket(field_H(), field_K(), s)) < 1e-8);
        CHECK(std::abs(lie_poisson_bracket(field_H(), field_G(p), s)) < 1e-8);
        CHECK(std::abs(lie_poisson_bracket(field_K(), field_G(p), s)) < 1e-8);
        CHECK(std::abs(lie_poisson_bracket(field_H(), field_M(p), s)) < 1e-8);
    }
}

TEST_CASE("bracket agrees with the structure-matrix oracle") {
    const BodyParams p = make_params(2, 1);
    Rng rng(17);
    const auto K = [](const PhaseState& s) { return integral_K(s); };
    const auto G = [&](const PhaseState& s) { return integral_G(s, p); };
    const auto X = [](const PhaseState& s) { return s.omega.x * s.alpha.z - s.beta.y * s.omega.z; };
    ScalarField fx;
    fx.name = "X";
    fx.value = X;
    for (int i = 0; i < 10; ++i) {
        const PhaseState s = random_admissible_state(rng, p);
        CHECK(lie_poisson_bracket(field_K(), field_G(p), s) == Approx(oracle_bracket(K, G, s)).epsilon(1e-6));
        CHECK(lie_poisson_bracket(fx, field_K(), s) == Approx(oracle_bracket(X, K, s)).epsilon(1e-6));
        CHECK(lie_poisson_bracket(field_G(p), fx, s) == Approx(oracle_bracket(G, X, s)).epsilon(1e-6));
    }
}

TEST_CASE("finite-difference gradient matches the analytic one") {
    const BodyParams p = make_params(2, 1);
    Rng rng(23);
    for (const ScalarField& f : {field_H(), field_K(), field_G(p), field_F(p), field_M(p), field_L(p)}) {
        ScalarField numeric = f;
        numeric.gradient = nullptr;
        const PhaseState s = random_admissible_state(rng, p, 0.5);
        if (std::isnan(f.value(s))) continue;
        const PhaseVector ga = gradient(f, s), gn = gradient(numeric, s);
        for (int i = 0; i < 9; ++i) CHECK(gn[i] == Approx(ga[i]).epsilon(1e-6).scale(1.0));
    }
}

TEST_CASE("bracket is antisymmetric") {
    const BodyParams p = make_params(2, 1);
    Rng rng(29);
    const PhaseState s = random_admissible_state(rng, p);
    const double x = lie_poisson_bracket(field_K(), momentum_component(0), s);
    const double y = lie_poisson_bracket(momentum_component(0), field_K(), s);
    CHECK(x == Approx(-y));
    CHECK(x != Approx(0.0));
}

TEST_CASE("hamiltonian field reproduces the equations of motion") {
    const BodyParams p = make_params(2, 1);
    CHECK(to_vector(hamiltonian_field(kEquilibrium)) == PhaseVector{});
    const PhaseTangent d = hamiltonian_field({{0, 0, 0}, {0, 0, 2}, {0, 0, 0}});
    CHECK(2 * d.omega.y == Approx(-2.0));
    CHECK(d.omega.x == 0.0);
    CHECK(d.omega.z == 0.0);
    Rng rng(31);
    for (int i = 0; i < 20; ++i) {
        const PhaseState s = random_admissible_state(rng, p);
        const PhaseVector a = to_vector(hamiltonian_field(s)), b = to_vector(euler_poisson_rhs(s));
        for (int k = 0; k < 9; ++k) CHECK(a[k] == Approx(b[k]).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("bracket with an undefined L throws") {
    const BodyParams p = make_params(2, 1);
    // Large negative M with small H can make the L radicand negative.
    Rng rng(37);
    bool found = false;
    for (int i = 0; i < 2000 && !found; ++i) {
        const PhaseState s = random_admissible_state(rng, p, 3.0);
        if (!integral_FML(s, p).l) {
            found = true;
            CHECK_THROWS_AS(lie_poisson_bracket(field_L(p), field_H(), s), DomainError);
        }
    }
    CHECK(found);
}
