// kovtop: simulations and consistency checks for the top in a double force field.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "kovtop/error.hpp"

using namespace kovtop::cli;
using nlohmann::json;

namespace {

json echo_options(const CLI::App& app) {
    json out = json::object();
    for (const CLI::Option* opt : app.get_options()) {
        const std::string name = opt->get_name();
        if (name == "--help" || name == "-h") continue;
        const std::string key = opt->get_lnames().empty() ? name : opt->get_lnames().front();
        if (opt->count() > 0) {
            const auto& r = opt->results();
            out[key] = r.size() == 1 ? json(r.front()) : json(r);
        } else {
            out[key] = opt->get_default_str();
        }
    }
    return out;
}

bool write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    f << text;
    return static_cast<bool>(f);
}

void add_state_flags(CLI::App* sub, std::optional<std::array<double, 3>>& omega,
                     std::optional<std::array<double, 3>>& alpha,
                     std::optional<std::array<double, 3>>& beta) {
    sub->add_option("--omega", omega, "angular velocity w1,w2,w3")->delimiter(',');
    sub->add_option("--alpha", alpha, "first field vector in the body frame")->delimiter(',');
    sub->add_option("--beta", beta, "second field vector in the body frame")->delimiter(',');
}

void add_start_flags(CLI::App* sub, SeparatedStart& st) {
    sub->add_option("--m", st.m, "separation constant m (nonzero)");
    sub->add_option("--l", st.l, "separation constant l (>= 0)");
    sub->add_option("--s1", st.s1, "initial s1 (default: middle of its interval)");
    sub->add_option("--s2", st.s2, "initial s2 (default: middle of its interval)");
    const auto pm = CLI::IsMember({-1, 1});
    sub->add_option("--eps1", st.eps1, "sign of sqrt(s1^2-a^2)")->capture_default_str()->check(pm);
    sub->add_option("--eps2", st.eps2, "sign of sqrt(b^2-s2^2)")->capture_default_str()->check(pm);
    sub->add_option("--sig1", st.sig1, "sign of sqrt(-Phi(s1))")->capture_default_str()->check(pm);
    sub->add_option("--sig2", st.sig2, "sign of sqrt(Phi(s2))")->capture_default_str()->check(pm);
}

void add_tolerances(CLI::App* sub, double& rel, double& abs) {
    sub->add_option("--rel-tol", rel, "relative tolerance")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--abs-tol", abs, "absolute tolerance")->capture_default_str()->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kovalevskaya-type top in a double force field"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    Common common;
    std::string out_path;
    std::string format = "csv";
    auto common_flags = [&](CLI::App* sub) {
        sub->add_option("--a", common.a, "first field strength a")->capture_default_str();
        sub->add_option("--b", common.b, "second field strength b (0 < b < a)")->capture_default_str();
        sub->add_option("--out", out_path, "output file (default: stdout)");
        sub->add_option("--format", format, "csv or json")->capture_default_str()->check(CLI::IsMember({"csv", "json"}));
    };

    SimulateOptions sim;
    auto* s_sim = app.add_subcommand("simulate", "integrate the equations of motion");
    common_flags(s_sim);
    add_state_flags(s_sim, sim.omega, sim.alpha, sim.beta);
    add_start_flags(s_sim, sim.start);
    s_sim->add_option("--t-end", sim.t_end, "final time")->capture_default_str();
    s_sim->add_option("--dt", sim.dt, "output spacing")->capture_default_str()->check(CLI::PositiveNumber);
    add_tolerances(s_sim, sim.rel_tol, sim.abs_tol);

    CheckOptions chk;
    auto* s_chk = app.add_subcommand("check", "run the invariant suites on random samples");
    common_flags(s_chk);
    s_chk->add_option("--seed", chk.seed, "mt19937_64 seed")->capture_default_str();
    s_chk->add_option("--n-samples", chk.n_samples, "samples per suite")->capture_default_str();
    s_chk->add_option("--mutate", chk.mutate, "test hook: inject a sign error (e.g. f2-prefactor)");

    CrosscheckOptions cc;
    auto* s_cc = app.add_subcommand("crosscheck", "full system vs separated system");
    common_flags(s_cc);
    add_start_flags(s_cc, cc.start);
    s_cc->add_option("--periods", cc.periods, "length in s2 periods")->capture_default_str();
    s_cc->add_option("--t-end", cc.t_end, "length when both coordinates are at rest")->capture_default_str();
    s_cc->add_option("--dt", cc.dt, "output spacing")->capture_default_str()->check(CLI::PositiveNumber);
    add_tolerances(s_cc, cc.rel_tol, cc.abs_tol);

    BifurcationOptions bif;
    auto* s_bif = app.add_subcommand("bifurcation", "classify a grid of (m, l)");
    common_flags(s_bif);
    s_bif->add_option("--m-min", bif.m_min)->capture_default_str();
    s_bif->add_option("--m-max", bif.m_max)->capture_default_str();
    s_bif->add_option("--l-min", bif.l_min)->capture_default_str();
    s_bif->add_option("--l-max", bif.l_max)->capture_default_str();
    s_bif->add_option("--resolution", bif.resolution, "points per axis")->capture_default_str()->check(CLI::PositiveNumber);

    PeriodOptions per;
    auto* s_per = app.add_subcommand("period", "closed-form period vs ODE return time");
    common_flags(s_per);
    s_per->add_option("--m", per.m)->required();
    s_per->add_option("--l", per.l)->required();
    s_per->add_option("--which", per.which, "s1 or s2")->capture_default_str()->check(CLI::IsMember({"s1", "s2"}));
    s_per->add_option("--s", per.s, "point selecting the interval");
    add_tolerances(s_per, per.rel_tol, per.abs_tol);

    ParamsOptions prm;
    auto* s_prm = app.add_subcommand("params", "derived constants, separating lines, field normalization");
    common_flags(s_prm);
    add_state_flags(s_prm, prm.omega, prm.alpha, prm.beta);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    common.format = format == "json" ? Format::json : Format::csv;

    CLI::App* sub = app.get_subcommands().front();
    const std::map<std::string, std::function<CommandResult()>> table = {
        {"simulate", [&] { return cmd_simulate(common, sim); }},
        {"check", [&] { return cmd_check(common, chk); }},
        {"crosscheck", [&] { return cmd_crosscheck(common, cc); }},
        {"bifurcation", [&] { return cmd_bifurcation(common, bif); }},
        {"period", [&] { return cmd_period(common, per); }},
        {"params", [&] { return cmd_params(common, prm); }},
    };

    const auto start = std::chrono::steady_clock::now();
    CommandResult res;
    try {
        res = table.at(sub->get_name())();
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n\n" << sub->help();
        return 2;
    } catch (const std::exception& e) {
        res.exit_code = 1;
        res.message = e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json manifest = {{"command", sub->get_name()},
                     {"parameters", echo_options(*sub)},
                     {"seed", sub->get_name() == "check" ? json(chk.seed) : json(nullptr)},
                     {"version", kVersion},
                     {"duration_seconds", seconds},
                     {"exit_code", res.exit_code},
                     {"status", res.exit_code == 0 ? "ok" : "error"},
                     {"summary", res.summary},
                     {"outputs", json::array()}};
    if (!res.message.empty()) manifest["message"] = res.message;

    if (!res.data.empty()) {
        if (out_path.empty()) {
            std::cout << res.data;
        } else if (write_text(out_path, res.data)) {
            manifest["outputs"].push_back(out_path);
        } else {
            std::cerr << "error: cannot write " << out_path << "\n";
            res.exit_code = 1;
            manifest["exit_code"] = 1;
            manifest["status"] = "error";
        }
    }
    if (!res.message.empty()) std::cerr << (res.exit_code ? "error: " : "") << res.message << (res.message.back() == '\n' ? "" : "\n");

    const std::string manifest_text = manifest.dump(2) + "\n";
    if (out_path.empty()) {
        std::cerr << manifest_text;
    } else if (!write_text(out_path + ".manifest.json", manifest_text)) {
        std::cerr << "error: cannot write " << out_path << ".manifest.json\n";
        return 1;
    }
    return res.exit_code;
}
