#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <variant>
#include <vector>

#include "kovtop/bifurcation.hpp"
#include "kovtop/checks.hpp"
#include "kovtop/dynamics.hpp"
#include "kovtop/elliptic.hpp"
#include "kovtop/error.hpp"
#include "kovtop/manifold.hpp"
#include "kovtop/mutation.hpp"
#include "kovtop/poisson.hpp"
#include "kovtop/separation.hpp"

namespace kovtop::cli {

using nlohmann::json;

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

using Cell = std::variant<double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    std::string render(Format f) const {
        if (f == Format::json) {
            json out;
            out["columns"] = columns;
            json rs = json::array();
            for (const auto& r : rows) {
                json jr = json::array();
                for (const auto& c : r) {
                    if (const double* d = std::get_if<double>(&c)) {
                        jr.push_back(std::isfinite(*d) ? json(*d) : json(nullptr));
                    } else {
                        jr.push_back(std::get<std::string>(c));
                    }
                }
                rs.push_back(std::move(jr));
            }
            out["rows"] = std::move(rs);
            return out.dump(2) + "\n";
        }
        std::string out;
        for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
        out += "\n";
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) {
                if (i) out += ",";
                if (const double* d = std::get_if<double>(&r[i])) {
                    out += format_number(*d);
                } else {
                    out += std::get<std::string>(r[i]);
                }
            }
            out += "\n";
        }
        return out;
    }
};

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json state_json(const PhaseState& s) {
    return {{"omega", {s.omega.x, s.omega.y, s.omega.z}},
            {"alpha", {s.alpha.x, s.alpha.y, s.alpha.z}},
            {"beta", {s.beta.x, s.beta.y, s.beta.z}}};
}

Vec3 vec(const std::array<double, 3>& v) { return {v[0], v[1], v[2]}; }

Sign sign_flag(int v, const char* name) {
    if (v != 1 && v != -1) throw UsageError(std::string("--") + name + " must be +1 or -1");
    return sign_of(v);
}

std::string verdict(const RegionDescriptor& d) {
    if (d.n_s1 == 0 && d.n_s2 == 0) return "s1 and s2 intervals empty";
    if (d.n_s1 == 0) return "s1 interval empty";
    if (d.n_s2 == 0) return "s2 interval empty";
    return "admissible";
}

json region_json(const RegionDescriptor& d) {
    return {{"n_s1", d.n_s1},           {"n_s2", d.n_s2},
            {"admissible", d.admissible}, {"on_set", d.on_set},
            {"active_lines", d.active_lines}, {"on_half_line", d.on_half_line},
            {"s1_degenerate", d.s1_degenerate}, {"s2_degenerate", d.s2_degenerate},
            {"verdict", verdict(d)}};
}

// Bounded components first, and for s1 the positive side first.
const Interval* preferred_component(const std::vector<Interval>& comps) {
    const Interval* best = nullptr;
    auto rank = [](const Interval& i) { return (i.bounded() ? 0 : 2) + (i.hi > 0.0 ? 0 : 1); };
    for (const auto& c : comps) {
        if (!best || rank(c) < rank(*best)) best = &c;
    }
    return best;
}

double default_coordinate(const std::vector<Interval>& comps) {
    const Interval* c = preferred_component(comps);
    if (c->bounded()) return 0.5 * (c->lo + c->hi);
    return std::isfinite(c->lo) ? c->lo + 1.0 : c->hi - 1.0;
}

void require_in(const std::vector<Interval>& comps, double s, const char* name) {
    const double tol = 1e-10 * std::max(1.0, std::abs(s));
    for (const auto& c : comps) {
        if (c.contains(s, tol)) return;
    }
    std::ostringstream msg;
    msg << name << " = " << s << " lies in no admissible interval";
    throw ValidationError(msg.str());
}

struct ResolvedStart {
    SeparationConstants c;
    SeparatedPoint point;
    RegionDescriptor region;
};

ResolvedStart resolve_start(const SeparatedStart& st, const BodyParams& p) {
    if (!st.m || !st.l) throw UsageError("--m and --l are required");
    ResolvedStart r;
    r.c = make_constants(*st.m, *st.l);
    r.region = classify(r.c, p);
    if (!r.region.admissible) {
        std::ostringstream msg;
        msg << "(m, l) = (" << r.c.m << ", " << r.c.l << ") is not admissible: " << verdict(r.region);
        throw ValidationError(msg.str());
    }
    const AdmissibleIntervals iv = admissible_intervals(r.c, p);
    r.point.s1 = st.s1 ? *st.s1 : default_coordinate(iv.s1);
    r.point.s2 = st.s2 ? *st.s2 : default_coordinate(iv.s2);
    require_in(iv.s1, r.point.s1, "s1");
    require_in(iv.s2, r.point.s2, "s2");
    r.point.eps1 = sign_flag(st.eps1, "eps1");
    r.point.eps2 = sign_flag(st.eps2, "eps2");
    r.point.sig1 = sign_flag(st.sig1, "sig1");
    r.point.sig2 = sign_flag(st.sig2, "sig2");
    return r;
}

json point_json(const ResolvedStart& r) {
    return {{"m", r.c.m},
            {"l", r.c.l},
            {"s1", r.point.s1},
            {"s2", r.point.s2},
            {"eps1", to_int(r.point.eps1)},
            {"eps2", to_int(r.point.eps2)},
            {"sig1", to_int(r.point.sig1)},
            {"sig2", to_int(r.point.sig2)}};
}

json drift_json(const DriftReport& d) {
    return {{"H", d.h},
            {"K", d.k},
            {"G", d.g},
            {"F", d.f},
            {"M", d.m},
            {"L", d.l_defined ? json(d.l) : json(nullptr)},
            {"casimir_alpha", d.casimir_alpha},
            {"casimir_beta", d.casimir_beta},
            {"casimir_cross", d.casimir_cross},
            {"max_integral", d.max_integral()},
            {"max_casimir", d.max_casimir()}};
}

}  // namespace

CommandResult cmd_simulate(const Common& common, const SimulateOptions& opt) {
    const BodyParams p = make_params(common.a, common.b);
    const bool raw = opt.omega || opt.alpha || opt.beta;
    const bool sep = opt.start.m || opt.start.l || opt.start.s1 || opt.start.s2;
    if (raw && sep) throw UsageError("give either --omega/--alpha/--beta or --m/--l/--s1/--s2, not both");
    if (!raw && !sep) throw UsageError("an initial state is required: --omega/--alpha/--beta or --m/--l");

    CommandResult res;
    PhaseState s0;
    if (raw) {
        if (!opt.omega || !opt.alpha || !opt.beta) {
            throw UsageError("--omega, --alpha and --beta must be given together");
        }
        s0 = {vec(*opt.omega), vec(*opt.alpha), vec(*opt.beta)};
    } else {
        const ResolvedStart r = resolve_start(opt.start, p);
        s0 = reconstruct(r.point, r.c, p);
        res.summary["separated_start"] = point_json(r);
    }

    IntegratorConfig cfg;
    cfg.t_end = opt.t_end;
    cfg.sample_dt = opt.dt;
    cfg.rel_tol = opt.rel_tol;
    cfg.abs_tol = opt.abs_tol;
    const Trajectory traj = integrate(s0, cfg, p);

    Table t;
    t.columns = {"t",     "omega1", "omega2", "omega3", "alpha1", "alpha2", "alpha3", "beta1", "beta2",
                 "beta3", "H",      "K",      "G",      "F",      "M",      "L",      "resF1", "resF2"};
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const PhaseState& s = traj.states[k];
        const IntegralValues iv = integral_FML(s, p);
        double f1 = std::nan(""), f2 = std::nan("");
        try {
            const F1F2 f = F1_F2(state_to_chart(s));
            f1 = std::abs(f.f1);
            f2 = std::abs(f.f2);
        } catch (const DomainError&) {
            // outside the chart domain x1 x2 != 0
        }
        std::vector<Cell> row{traj.times[k]};
        for (double v : to_vector(s)) row.emplace_back(v);
        for (double v : {iv.h, iv.k, iv.g, iv.f, iv.m, iv.l ? *iv.l : std::nan(""), f1, f2}) row.emplace_back(v);
        t.rows.push_back(std::move(row));
    }
    res.data = t.render(common.format);
    res.summary["initial_state"] = state_json(s0);
    res.summary["drift"] = drift_json(traj.drift);
    res.summary["steps"] = traj.steps;
    res.summary["samples"] = traj.times.size();
    return res;
}

CommandResult cmd_check(const Common& common, const CheckOptions& opt) {
    const BodyParams p = make_params(common.a, common.b);
    Mutation mut = Mutation::none;
    if (!opt.mutate.empty()) {
        const auto m = mutation_from_string(opt.mutate);
        if (!m) throw UsageError("unknown mutation '" + opt.mutate + "'");
        mut = *m;
    }
    const ScopedMutation guard(mut);
    const CheckReport rep = run_checks(p, {opt.seed, opt.n_samples});

    json suites = json::array();
    for (const auto& s : rep.suites) {
        suites.push_back({{"name", s.name},
                          {"passed", s.passed},
                          {"worst", num(s.worst)},
                          {"tolerance", s.tolerance},
                          {"samples", s.samples},
                          {"skipped", s.skipped},
                          {"note", s.note}});
    }
    json out = {{"passed", rep.passed()},
                {"seed", opt.seed},
                {"n_samples", opt.n_samples},
                {"mutation", std::string(to_string(mut))},
                {"warnings", rep.warnings},
                {"suites", suites}};
    CommandResult res;
    res.data = out.dump(2) + "\n";
    res.summary = {{"passed", rep.passed()}};
    for (const auto& w : rep.warnings) res.message += "warning: " + w + "\n";
    if (!rep.passed()) {
        res.exit_code = 1;
        for (const auto& s : rep.suites) {
            if (!s.passed) res.message += "suite failed: " + s.name + "\n";
        }
    }
    return res;
}

CommandResult cmd_crosscheck(const Common& common, const CrosscheckOptions& opt) {
    const BodyParams p = make_params(common.a, common.b);
    if (!(opt.periods > 0.0)) throw ValidationError("--periods must be positive");
    const ResolvedStart r = resolve_start(opt.start, p);

    const QuarticSpec q1 = oscillation_spec(1, r.point.s1, r.c, p);
    const QuarticSpec q2 = oscillation_spec(2, r.point.s2, r.c, p);
    const PeriodResult t1 = period(q1), t2 = period(q2);
    if (t1.kind == PeriodKind::separatrix || t2.kind == PeriodKind::separatrix) {
        throw ValidationError("motion on a separatrix: the return time is infinite");
    }
    double t_end = opt.t_end;
    if (t2.kind == PeriodKind::finite) {
        t_end = opt.periods * t2.value;
    } else if (t1.kind == PeriodKind::finite) {
        t_end = opt.periods * t1.value;
    }

    CrosscheckConfig cfg;
    cfg.t_end = t_end;
    cfg.sample_dt = opt.dt;
    cfg.rel_tol = opt.rel_tol;
    cfg.abs_tol = opt.abs_tol;
    const CrosscheckReport rep = crosscheck(r.point, r.c, p, cfg);

    Table t;
    t.columns = {"t", "s1_full", "s1_sep", "s2_full", "s2_sep", "abs_delta"};
    for (const auto& row : rep.rows) {
        const double d = std::max(std::abs(row.s1_full - row.s1_sep), std::abs(row.s2_full - row.s2_sep));
        t.rows.push_back({row.t, row.s1_full, row.s1_sep, row.s2_full, row.s2_sep, d});
    }
    CommandResult res;
    res.data = t.render(common.format);
    res.summary = {{"start", point_json(r)},
                   {"region", region_json(r.region)},
                   {"t_end", t_end},
                   {"period_s1", num(t1.value)},
                   {"period_s2", num(t2.value)},
                   {"max_ds1", rep.max_ds1},
                   {"max_ds2", rep.max_ds2},
                   {"max_abs_delta", std::max(rep.max_ds1, rep.max_ds2)},
                   {"max_state_deviation", rep.max_state_deviation}};
    return res;
}

CommandResult cmd_bifurcation(const Common& common, const BifurcationOptions& opt) {
    const BodyParams p = make_params(common.a, common.b);
    const auto rows = diagram_grid({opt.m_min, opt.m_max}, {opt.l_min, opt.l_max}, opt.resolution, p);
    Table t;
    t.columns = {"m", "l", "n_s1", "n_s2", "admissible", "on_set", "lines_active"};
    std::size_t admissible = 0, on_set = 0;
    for (const auto& r : rows) {
        std::string lines;
        if (r.excluded) {
            lines = "excluded";
        } else {
            for (const auto& name : r.region.active_lines) lines += (lines.empty() ? "" : ";") + name;
            if (r.region.on_half_line) lines += (lines.empty() ? "" : ";") + std::string("l=0,m<0");
        }
        admissible += r.region.admissible;
        on_set += r.region.on_set;
        t.rows.push_back({r.m, r.l, double(r.region.n_s1), double(r.region.n_s2),
                          double(r.region.admissible), double(r.region.on_set), lines});
    }
    CommandResult res;
    res.data = t.render(common.format);
    res.summary = {{"points", rows.size()}, {"admissible", admissible}, {"on_set", on_set}};
    return res;
}

CommandResult cmd_period(const Common& common, const PeriodOptions& opt) {
    const BodyParams p = make_params(common.a, common.b);
    int which = 0;
    if (opt.which == "s1") which = 1;
    else if (opt.which == "s2") which = 2;
    else throw UsageError("--which must be s1 or s2");
    const SeparationConstants c = make_constants(opt.m, opt.l);
    const RegionDescriptor region = classify(c, p);

    CommandResult res;
    auto fail = [&](const std::string& why, json flags) {
        res.exit_code = 1;
        res.message = why;
        json out = {{"which", opt.which}, {"m", c.m}, {"l", c.l}, {"error", why}};
        out.update(flags);
        res.data = out.dump(2) + "\n";
        res.summary = out;
        return res;
    };

    const AdmissibleIntervals iv = admissible_intervals(c, p);
    const auto& comps = which == 1 ? iv.s1 : iv.s2;
    if (comps.empty()) return fail(verdict(region), {{"admissible", false}, {"region", region_json(region)}});
    double s = 0.0;
    if (opt.s) {
        s = *opt.s;
    } else {
        const Interval* comp = preferred_component(comps);
        if (!comp->bounded()) return fail("oscillation interval is unbounded", {{"unbounded", true}});
        s = 0.5 * (comp->lo + comp->hi);
    }
    const QuarticSpec q = oscillation_spec(which, s, c, p);
    const PeriodResult closed = period(q);
    if (closed.kind == PeriodKind::degenerate_point) {
        return fail("degenerate interval: the coordinate is at rest", {{"degenerate", true}});
    }
    if (closed.kind == PeriodKind::separatrix) {
        return fail("separatrix: the return time is infinite", {{"separatrix", true}});
    }
    const double ode = regularized_return_time(q, {opt.rel_tol, opt.abs_tol});
    json out = {{"which", opt.which},
                {"m", c.m},
                {"l", c.l},
                {"interval", {q.lower, q.upper}},
                {"period_closed_form", closed.value},
                {"period_ode", ode},
                {"rel_diff", std::abs(closed.value - ode) / closed.value}};
    res.data = out.dump(2) + "\n";
    res.summary = out;
    return res;
}

CommandResult cmd_params(const Common& common, const ParamsOptions& opt) {
    json out;
    BodyParams p;
    if (opt.alpha || opt.beta) {
        if (!opt.alpha || !opt.beta) throw UsageError("--alpha and --beta must be given together");
        const Vec3 w = opt.omega ? vec(*opt.omega) : Vec3{};
        const NormalizationReport n = normalize_fields(w, vec(*opt.alpha), vec(*opt.beta));
        p = make_params(n.a, n.b);
        out["normalization"] = {{"theta", n.theta}, {"state", state_json(n.state)}};
    } else {
        p = make_params(common.a, common.b);
    }
    out["a"] = p.a;
    out["b"] = p.b;
    out["p2"] = p.p2;
    out["r2"] = p.r2;
    json lines = json::array();
    for (const auto& l : separating_lines(p).lines) {
        lines.push_back({{"label", l.label}, {"slope", l.slope}, {"intercept", l.intercept}});
    }
    out["separating_lines"] = lines;
    out["half_line"] = "l=0,m<0";
    CommandResult res;
    res.data = out.dump(2) + "\n";
    res.summary = {{"a", p.a}, {"b", p.b}};
    return res;
}

}  // namespace kovtop::cli
