#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "doctest.h"
#include "kovtop/error.hpp"

using namespace kovtop;
using namespace kovtop::cli;
using nlohmann::json;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
    return out;
}

}  // namespace

TEST_CASE("format_number") {
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(1.0 / 3) == "0.33333333333333331");
    CHECK(format_number(NAN) == "nan");
    CHECK(format_number(INFINITY) == "inf");
    CHECK(format_number(-INFINITY) == "-inf");
}

TEST_CASE("simulate the equilibrium") {
    SimulateOptions o;
    o.omega = {{0, 0, 0}};
    o.alpha = {{2, 0, 0}};
    o.beta = {{0, 1, 0}};
    o.t_end = 1.0;
    const CommandResult r = cmd_simulate({}, o);
    CHECK(r.exit_code == 0);
    const auto rows = lines_of(r.data);
    REQUIRE(rows.size() == 12);
    CHECK(rows[0] == "t,omega1,omega2,omega3,alpha1,alpha2,alpha3,beta1,beta2,beta3,H,K,G,F,M,L,resF1,resF2");
    for (std::size_t i = 2; i < rows.size(); ++i) {
        const auto a = split(rows[1]), b = split(rows[i]);
        for (std::size_t k = 1; k < a.size(); ++k) CHECK(a[k] == b[k]);
    }
    CHECK(r.summary["drift"]["max_integral"].get<double>() == 0.0);
}

TEST_CASE("simulate from separated coordinates") {
    SimulateOptions o;
    o.start.m = 1.0;
    o.start.l = 3.5;
    o.t_end = 20.0;
    const CommandResult r = cmd_simulate({}, o);
    CHECK(r.exit_code == 0);
    CHECK(r.summary["drift"]["max_integral"].get<double>() < 1e-6);
    CHECK(r.summary.contains("separated_start"));
}

TEST_CASE("simulate usage errors") {
    SimulateOptions o;
    CHECK_THROWS_AS(cmd_simulate({}, o), UsageError);
    o.omega = {{0, 0, 0}};
    CHECK_THROWS_AS(cmd_simulate({}, o), UsageError);
    o.alpha = {{2, 0, 0}};
    o.beta = {{0, 1, 0}};
    o.start.m = 1.0;
    o.start.l = 3.5;
    CHECK_THROWS_AS(cmd_simulate({}, o), UsageError);
    SimulateOptions bad;
    bad.omega = {{0, 0, 0}};
    bad.alpha = {{2, 0, 0}};
    bad.beta = {{0, 2, 0}};
    CHECK_THROWS_AS(cmd_simulate({}, bad), ValidationError);
}

TEST_CASE("outputs are deterministic") {
    CheckOptions c;
    c.n_samples = 10;
    CHECK(cmd_check({}, c).data == cmd_check({}, c).data);
    CrosscheckOptions x;
    x.start.m = 1.0;
    x.start.l = 3.5;
    x.periods = 1.0;
    CHECK(cmd_crosscheck({}, x).data == cmd_crosscheck({}, x).data);
    CHECK(cmd_bifurcation({}, {}).data == cmd_bifurcation({}, {}).data);
}

TEST_CASE("check command") {
    CheckOptions c;
    c.n_samples = 20;
    CommandResult r = cmd_check({}, c);
    CHECK(r.exit_code == 0);
    const json j = json::parse(r.data);
    CHECK(j["passed"].get<bool>());
    CHECK(j["suites"].size() == 8);

    c.mutate = "f2-prefactor";
    r = cmd_check({}, c);
    CHECK(r.exit_code == 1);
    CHECK(r.message.find("bracket_ratio") != std::string::npos);

    c.mutate = "bogus";
    CHECK_THROWS_AS(cmd_check({}, c), UsageError);

    CheckOptions none;
    none.n_samples = 0;
    r = cmd_check({}, none);
    CHECK(r.exit_code == 0);
    CHECK(r.message.find("warning") != std::string::npos);
}

TEST_CASE("crosscheck command") {
    CrosscheckOptions x;
    x.start.m = 1.0;
    x.start.l = 3.5;
    CommandResult r = cmd_crosscheck({}, x);
    CHECK(r.exit_code == 0);
    CHECK(r.summary["max_abs_delta"].get<double>() < 1e-6);
    CHECK(lines_of(r.data)[0] == "t,s1_full,s1_sep,s2_full,s2_sep,abs_delta");

    x.start.l = 2.5;
    try {
        cmd_crosscheck({}, x);
        FAIL("expected a ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("s1 interval empty") != std::string::npos);
    }

    CrosscheckOptions missing;
    CHECK_THROWS_AS(cmd_crosscheck({}, missing), UsageError);

    CrosscheckOptions eq;
    eq.start.m = 1.0 / 3;
    eq.start.l = 1.0 / 3;
    eq.t_end = 2.0;
    r = cmd_crosscheck({}, eq);
    CHECK(r.exit_code == 0);
    CHECK(r.summary["max_abs_delta"].get<double>() == 0.0);
}

TEST_CASE("bifurcation command") {
    BifurcationOptions b;
    b.m_min = 1;
    b.m_max = 0;
    CommandResult r = cmd_bifurcation({}, b);
    CHECK(lines_of(r.data).size() == 1);

    b = {};
    b.m_min = 0;
    b.m_max = 2.0 / 3;
    b.l_min = 0;
    b.l_max = 2.0 / 3;
    b.resolution = 3;
    r = cmd_bifurcation({}, b);
    const auto rows = lines_of(r.data);
    REQUIRE(rows.size() == 10);
    CHECK(rows[0] == "m,l,n_s1,n_s2,admissible,on_set,lines_active");
    CHECK(split(rows[1]).back() == "excluded");
    const auto mid = split(rows[5]);
    CHECK(mid[6] == "l=2ma-1;l=-2mb+1");
    CHECK(mid[5] == "1");

    b = {};
    b.resolution = 5;
    const json j = json::parse(cmd_bifurcation({Common{2, 1, Format::json}}, b).data);
    CHECK(j["rows"].size() == 25);
    CHECK(j["columns"].size() == 7);
}

TEST_CASE("period command") {
    PeriodOptions o;
    o.m = 1.0;
    o.l = 3.5;
    CommandResult r = cmd_period({}, o);
    CHECK(r.exit_code == 0);
    json j = json::parse(r.data);
    CHECK(j["rel_diff"].get<double>() < 1e-8);
    CHECK(j["period_closed_form"].get<double>() == doctest::Approx(3.322405173438727).epsilon(1e-12));

    o.which = "s2";
    j = json::parse(cmd_period({}, o).data);
    CHECK(j["period_closed_form"].get<double>() == doctest::Approx(4.989889294790886).epsilon(1e-12));
    CHECK(j["rel_diff"].get<double>() < 1e-8);

    o.m = 1.0 / 3;
    o.l = 1.0 / 3;
    o.which = "s1";
    r = cmd_period({}, o);
    CHECK(r.exit_code == 1);
    CHECK(json::parse(r.data)["degenerate"].get<bool>());

    o.m = 1.0;
    o.l = 2.5;
    r = cmd_period({}, o);
    CHECK(r.exit_code == 1);
    CHECK(r.message.find("s1 interval empty") != std::string::npos);

    o.m = 0.0;
    CHECK_THROWS_AS(cmd_period({}, o), ValidationError);
}

TEST_CASE("params command") {
    json j = json::parse(cmd_params({}, {}).data);
    CHECK(j["p2"].get<double>() == 5.0);
    CHECK(j["r2"].get<double>() == 3.0);
    CHECK(j["separating_lines"].size() == 8);

    ParamsOptions o;
    o.alpha = {{3, 0, 0}};
    o.beta = {{0, 2, 0}};
    j = json::parse(cmd_params({}, o).data);
    CHECK(j["a"].get<double>() == 3.0);
    CHECK(j["b"].get<double>() == 2.0);
    ParamsOptions half;
    half.alpha = {{3, 0, 0}};
    CHECK_THROWS_AS(cmd_params({}, half), UsageError);
}
