#include <algorithm>
#include <string>

#include "doctest.h"
#include "kovtop/checks.hpp"
#include "kovtop/mutation.hpp"
#include "kovtop/separation.hpp"

using namespace kovtop;

TEST_CASE("all suites pass on the default configuration") {
    const CheckReport r = run_checks(make_params(2, 1), {1, 50});
    CHECK(r.passed());
    CHECK(r.warnings.empty());
    CHECK(r.suites.size() == 8);
    for (const auto& s : r.suites) {
        INFO(s.name << " worst " << s.worst << " note " << s.note);
        CHECK(s.passed);
        CHECK(s.samples + s.skipped == 50);
    }
}

TEST_CASE("other field strengths and seeds") {
    for (auto [a, b] : {std::pair{3.0, 0.5}, std::pair{1.2, 1.1}}) {
        const CheckReport r = run_checks(make_params(a, b), {7, 30});
        for (const auto& s : r.suites) {
            INFO(a << " " << b << " " << s.name << " worst " << s.worst << " note " << s.note);
            CHECK(s.passed);
        }
    }
}

TEST_CASE("no samples") {
    const CheckReport r = run_checks(make_params(2, 1), {1, 0});
    CHECK(r.passed());
    CHECK(r.warnings.size() == 1);
}

TEST_CASE("same seed, same report") {
    const CheckReport x = run_checks(make_params(2, 1), {5, 10});
    const CheckReport y = run_checks(make_params(2, 1), {5, 10});
    for (std::size_t i = 0; i < x.suites.size(); ++i) CHECK(x.suites[i].worst == y.suites[i].worst);
}

TEST_CASE("mutation names") {
    CHECK(all_mutations().size() == 9);
    for (Mutation m : all_mutations()) {
        const auto back = mutation_from_string(to_string(m));
        REQUIRE(back);
        CHECK(*back == m);
    }
    CHECK_FALSE(mutation_from_string("nonsense"));
    CHECK(mutation_from_string("f2-prefactor") == Mutation::f2_prefactor);
    CHECK(active_mutation() == Mutation::none);
    {
        const ScopedMutation g(Mutation::recon_phi2);
        CHECK(active_mutation() == Mutation::recon_phi2);
    }
    CHECK(active_mutation() == Mutation::none);
}

TEST_CASE("F2 sign errors are caught") {
    const BodyParams p = make_params(2, 1);
    for (Mutation m : {Mutation::f2_prefactor, Mutation::f2_difference, Mutation::f2_first_shift,
                       Mutation::f2_second_shift}) {
        const ScopedMutation g(m);
        INFO(to_string(m));
        CHECK_FALSE(check_bracket_ratio(p, {1, 50}).passed);
    }
}

TEST_CASE("reconstruction sign errors") {
    const BodyParams p = make_params(2, 1);
    {
        const ScopedMutation g(Mutation::recon_composite);
        CHECK_FALSE(check_reconstruction(p, {1, 50}).passed);
        CHECK_FALSE(check_bracket_ratio(p, {1, 50}).passed);
    }
    // A single flipped factor only relabels the flags: the state is still on
    // the level set, but it moves against the separated flow.
    const SeparationConstants c{1.0, 3.5};
    CrosscheckConfig cfg;
    cfg.t_end = 3.0;
    CHECK(crosscheck({2.1, 0.3}, c, p, cfg).max_ds1 < 1e-6);
    for (Mutation m : {Mutation::recon_rho1, Mutation::recon_rho2, Mutation::recon_phi1, Mutation::recon_phi2}) {
        const ScopedMutation g(m);
        INFO(to_string(m));
        CHECK(check_reconstruction(p, {1, 50}).passed);
        const CrosscheckReport r = crosscheck({2.1, 0.3}, c, p, cfg);
        CHECK(std::max(r.max_ds1, r.max_ds2) > 1e-3);
    }
}
