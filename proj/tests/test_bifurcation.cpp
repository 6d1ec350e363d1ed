#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "kovtop/bifurcation.hpp"
#include "kovtop/error.hpp"
#include "kovtop/sampling.hpp"

using namespace kovtop;
using doctest::Approx;

namespace {

bool has(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

TEST_CASE("separating lines") {
    const BodyParams p = make_params(2, 1);
    const SeparatingSet set = separating_lines(p);
    REQUIRE(set.lines.size() == 8);
    std::set<std::pair<double, double>> got;
    for (const auto& l : set.lines) got.insert({l.slope, l.intercept});
    const std::set<std::pair<double, double>> want = {{4, 1},  {4, -1},  {-4, 1}, {-4, -1},
                                                      {2, 1},  {2, -1},  {-2, 1}, {-2, -1}};
    CHECK(got == want);
    std::set<std::string> labels;
    for (const auto& l : set.lines) labels.insert(l.label);
    CHECK(labels.size() == 8);
    CHECK(labels.count("l=2ma-1") == 1);
    CHECK(labels.count("l=-2mb+1") == 1);

    CHECK(set.on_half_line(-1.0, 0.0, 1e-9));
    CHECK_FALSE(set.on_half_line(1.0, 0.0, 1e-9));
    CHECK_FALSE(set.on_half_line(-1.0, 0.1, 1e-9));
}

TEST_CASE("Phi vanishes at the field bound exactly on the lines") {
    const BodyParams p = make_params(2, 1);
    for (const auto& line : separating_lines(p).lines) {
        for (double m : {-1.5, -0.4, 0.3, 1.1}) {
            const double l = line.slope * m + line.intercept;
            if (l < 0) continue;
            const SeparationConstants c{m, l};
            const double bound = std::abs(line.slope) / 2;
            CHECK(std::min(std::abs(phi(bound, c)), std::abs(phi(-bound, c))) < 1e-10);
        }
    }
    // Phi roots at +-c  <=>  (l -+ 1)/(2m) = +-c.
    const SeparationConstants c{1.0, 3.0};
    CHECK(phi(2.0, c) == Approx(0.0));
}

TEST_CASE("Phi discriminant is constant") {
    Rng rng(131);
    for (int i = 0; i < 20; ++i) {
        const double m = rng.uniform(0.1, 3) * to_int(rng.sign()), l = rng.uniform(0, 6);
        const double A = 4 * m, B = -4 * l, C = (l * l - 1) / m;
        CHECK(B * B - 4 * A * C == Approx(16.0));
        const auto [r0, r1] = phi_roots({m, l});
        CHECK(std::abs(r1 - r0) == Approx(1.0 / std::abs(m)));
    }
}

TEST_CASE("classify examples") {
    const BodyParams p = make_params(2, 1);
    RegionDescriptor d = classify({1.0, 3.5}, p);
    CHECK(d.n_s1 == 1);
    CHECK(d.n_s2 == 1);
    CHECK(d.admissible);
    CHECK_FALSE(d.on_set);

    d = classify({1.0, 2.5}, p);
    CHECK(d.n_s1 == 0);
    CHECK(d.n_s2 == 1);
    CHECK_FALSE(d.admissible);

    d = classify({1.0 / 3, 1.0 / 3}, p);
    CHECK(d.on_set);
    CHECK(d.active_lines.size() == 2);
    CHECK(has(d.active_lines, "l=2ma-1"));
    CHECK(has(d.active_lines, "l=-2mb+1"));
    CHECK(d.s1_degenerate);
    CHECK(d.s2_degenerate);
    CHECK(d.admissible);

    d = classify({1.0, 3.0}, p);
    CHECK(has(d.active_lines, "l=2ma-1"));

    d = classify({-1.0, 0.0}, p);
    CHECK(d.on_half_line);
    CHECK(d.on_set);

    CHECK_THROWS_AS(classify({0.0, 1.0}, p), ValidationError);
}

TEST_CASE("classify agrees with the intervals") {
    const BodyParams p = make_params(2, 1);
    Rng rng(137);
    for (int i = 0; i < 300; ++i) {
        const SeparationConstants c{rng.uniform(-3, 3), rng.uniform(0, 8)};
        const RegionDescriptor d = classify(c, p);
        const AdmissibleIntervals iv = admissible_intervals(c, p);
        CHECK(d.n_s1 == int(iv.s1.size()));
        CHECK(d.n_s2 == int(iv.s2.size()));
        CHECK(d.admissible == (!iv.s1.empty() && !iv.s2.empty()));
        CHECK_FALSE(d.on_set);  // a random point misses every line
    }
}

TEST_CASE("component counts only change across the lines") {
    const BodyParams p = make_params(2, 1);
    const SeparatingSet set = separating_lines(p);
    // Along a vertical segment at fixed m, the counts are constant between
    // consecutive crossings with the lines.
    for (double m : {-1.3, -0.35, 0.45, 1.2}) {
        std::vector<double> cuts;
        for (const auto& line : set.lines) cuts.push_back(line.slope * m + line.intercept);
        cuts.push_back(0.0);
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            const double lo = std::max(cuts[k], 0.0), hi = cuts[k + 1];
            if (hi - lo < 1e-6) continue;
            const RegionDescriptor ref = classify({m, lo + 0.5 * (hi - lo)}, p);
            for (double f : {0.01, 0.25, 0.75, 0.99}) {
                const RegionDescriptor d = classify({m, lo + f * (hi - lo)}, p);
                CHECK(d.n_s1 == ref.n_s1);
                CHECK(d.n_s2 == ref.n_s2);
            }
        }
    }
    // Crossing l = 2ma - 1 at m = 1 opens the s1 interval.
    CHECK(classify({1.0, 2.9}, p).n_s1 == 0);
    CHECK(classify({1.0, 3.1}, p).n_s1 == 1);
}

TEST_CASE("diagram grid") {
    const BodyParams p = make_params(2, 1);
    auto rows = diagram_grid({-1, 1}, {0, 2}, 3, p);
    REQUIRE(rows.size() == 9);
    CHECK(rows[0].m == -1.0);
    CHECK(rows[1].m == 0.0);
    CHECK(rows[2].m == 1.0);
    CHECK(rows[3].l == 1.0);
    CHECK(rows[1].excluded);
    CHECK_FALSE(rows[0].excluded);
    CHECK(rows[0].region.on_half_line);  // (-1, 0)

    CHECK(diagram_grid({1, 0}, {0, 1}, 5, p).empty());
    rows = diagram_grid({0.5, 1}, {1, 2}, 1, p);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].m == 0.5);
    CHECK(rows[0].l == 1.0);

    CHECK_THROWS_AS(diagram_grid({0, 1}, {0, 1}, 0, p), ValidationError);
    CHECK_THROWS_AS(diagram_grid({0, INFINITY}, {0, 1}, 3, p), ValidationError);

    rows = diagram_grid({0, 1}, {0, 1}, 4, p);
    CHECK(rows.back().m == 1.0);
    CHECK(rows.back().l == 1.0);
}

TEST_CASE("refining the grid keeps the coarse classification") {
    const BodyParams p = make_params(2, 1);
    const auto coarse = diagram_grid({-2, 2}, {-1, 6}, 11, p);
    const auto fine = diagram_grid({-2, 2}, {-1, 6}, 21, p);
    std::map<std::pair<double, double>, const GridRow*> index;
    for (const auto& r : fine) index[{r.m, r.l}] = &r;
    for (const auto& r : coarse) {
        const auto it = index.find({r.m, r.l});
        REQUIRE(it != index.end());
        CHECK(it->second->region.n_s1 == r.region.n_s1);
        CHECK(it->second->region.n_s2 == r.region.n_s2);
        CHECK(it->second->region.on_set == r.region.on_set);
        CHECK(it->second->excluded == r.excluded);
    }
}

TEST_CASE("grid through the equilibrium values") {
    const BodyParams p = make_params(2, 1);
    const auto rows = diagram_grid({0, 2.0 / 3}, {0, 2.0 / 3}, 3, p);
    bool found = false;
    for (const auto& r : rows) {
        if (std::abs(r.m - 1.0 / 3) < 1e-15 && std::abs(r.l - 1.0 / 3) < 1e-15) {
            found = true;
            CHECK(r.region.active_lines.size() == 2);
        }
    }
    CHECK(found);
}
