#include "kovtop/checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "kovtop/dynamics.hpp"
#include "kovtop/error.hpp"
#include "kovtop/manifold.hpp"
#include "kovtop/poisson.hpp"
#include "kovtop/sampling.hpp"
#include "kovtop/separation.hpp"

namespace kovtop {

bool CheckReport::passed() const {
    return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed; });
}

namespace {

// Each suite draws from its own stream so suites can run in any order.
Rng suite_rng(const CheckConfig& cfg, std::uint64_t salt) {
    return Rng(cfg.seed * 0x9E3779B97F4A7C15ULL + salt);
}

double max_abs(const PhaseVector& x, const PhaseVector& y) {
    double out = 0.0;
    for (int i = 0; i < 9; ++i) out = std::max(out, std::abs(x[i] - y[i]));
    return out;
}

double scale_of(const PhaseState& s) {
    double out = 1.0;
    for (double v : to_vector(s)) out = std::max(out, std::abs(v));
    return out;
}

// Runs `body` on each sample; body returns the residual or nullopt to skip.
SuiteResult run_suite(std::string name, double tol, std::size_t n,
                      const std::function<std::optional<double>(std::size_t)>& body) {
    SuiteResult r;
    r.name = std::move(name);
    r.tolerance = tol;
    for (std::size_t i = 0; i < n; ++i) {
        std::optional<double> res;
        try {
            res = body(i);
        } catch (const std::exception& e) {
            r.passed = false;
            if (r.note.empty()) r.note = std::string("sample ") + std::to_string(i) + ": " + e.what();
            ++r.samples;
            continue;
        }
        if (!res) {
            ++r.skipped;
            continue;
        }
        ++r.samples;
        const double v = *res;
        if (!(v <= tol)) r.passed = false;
        if (std::isnan(v) || v > r.worst) r.worst = v;
    }
    return r;
}

ScalarField coordinate_field(int i) {
    ScalarField f;
    f.name = "u" + std::to_string(i);
    f.value = [i](const PhaseState& s) { return to_vector(s)[i]; };
    f.gradient = [i](const PhaseState&) {
        PhaseVector g{};
        g[i] = 1.0;
        return g;
    };
    return f;
}

}  // namespace

SuiteResult check_involutivity(const BodyParams& p, const CheckConfig& cfg) {
    Rng rng = suite_rng(cfg, 1);
    const ScalarField h = field_H(), k = field_K(), g = field_G(p);
    return run_suite("involutivity", 1e-8, cfg.n_samples, [&](std::size_t) -> std::optional<double> {
        const PhaseState s = random_admissible_state(rng, p);
        return std::max({std::abs(lie_poisson_bracket(h, k, s)), std::abs(lie_poisson_bracket(h, g, s)),
                         std::abs(lie_poisson_bracket(k, g, s))});
    });
}

SuiteResult check_casimirs(const BodyParams& p, const CheckConfig& cfg) {
    Rng rng = suite_rng(cfg, 2);
    const std::vector<ScalarField> cas = {field_alpha_norm(), field_beta_norm(), field_alpha_beta()};
    const std::vector<ScalarField> other = {field_H(), field_K(), field_G(p), coordinate_field(0),
                                            coordinate_field(4), coordinate_field(8)};
    return run_suite("casimirs", 1e-8, cfg.n_samples, [&](std::size_t) -> std::optional<double> {
        const PhaseState s = random_admissible_state(rng, p);
        double worst = 0.0;
        for (const auto& c : cas) {
            for (const auto& f : other) worst = std::max(worst, std::abs(lie_poisson_bracket(c, f, s)));
        }
        return worst;
    });
}

SuiteResult check_chart_roundtrip(const BodyParams& p, const CheckConfig& cfg) {
    Rng rng = suite_rng(cfg, 3);
    return run_suite("chart_roundtrip", 1e-12, cfg.n_samples, [&](std::size_t) -> std::optional<double> {
        const PhaseState s = random_admissible_state(rng, p);
        const ComplexChart c = state_to_chart(s);
        const double sc = scale_of(s);
        const double back = max_abs(to_vector(chart_to_state(c)), to_vector(s)) / sc;
        const auto r = constraint_residuals_chart(c, p);
        const double cons = std::max({std::abs(r.first), std::abs(r.second), std::abs(r.third)}) / (sc * sc);
        return std::max(back, cons);
    });
}

SuiteResult check_identities(const BodyParams& p, const CheckConfig& cfg) {
    Rng rng = suite_rng(cfg, 4);
    return run_suite("identities", 1e-10, cfg.n_samples, [&](std::size_t) -> std::optional<double> {
        const PhaseState s = random_admissible_state(rng, p);
        const auto id = time_derivative_identities(s);
        const double sc = scale_of(s);
        return std::max(std::abs(id.real_part), std::abs(id.imag_part)) / (sc * sc * sc);
    });
}

SuiteResult check_rhs_vs_bracket(const BodyParams& p, const CheckConfig& cfg) {
    Rng rng = suite_rng(cfg, 5);
    const ScalarField h = field_H();
    std::vector<ScalarField> coords;
    for (int i = 0; i < 9; ++i) coords.push_back(coordinate_field(i));
    return run_suite("rhs_vs_bracket", 1e-10, cfg.n_samples, [&](std::size_t) -> std::optional<double> {
        const PhaseState s = random_admissible_state(rng, p);
        const PhaseVector rhs = to_vector(euler_poisson_rhs(s));
        PhaseVector br{};
        for (int i = 0; i < 9; ++i) br[i] = lie_poisson_bracket(coords[i], h, s);
        const double sc = scale_of(s);
        return max_abs(rhs, br) / (sc * sc);
    });
}

SuiteResult check_bracket_ratio(const BodyParams& p, const CheckConfig& cfg) {
    Rng rng = suite_rng(cfg, 6);
    double sum = 0.0, sum2 = 0.0;
    std::size_t n = 0;
    SuiteResult r = run_suite("bracket_ratio", 1e-6, cfg.n_samples, [&](std::size_t) -> std::optional<double> {
        const MemberSample smp = random_member(rng, p);
        const PhaseState s = reconstruct(smp.point, smp.constants, p);
        const IntegralValues iv = integral_FML(s, p);
        if (!iv.l || *iv.l < 1e-6) return std::nullopt;
        // Normalized by the sheet, the ratio is kBracketSign everywhere on N.
        const double ratio = sheet(smp.point) * bracket_ratio(s, p);
        sum += ratio;
        sum2 += ratio * ratio;
        ++n;
        return std::abs(ratio - kBracketSign);
    });
    if (n > 0) {
        const double mean = sum / n;
        const double sd = std::sqrt(std::max(0.0, sum2 / n - mean * mean));
        std::ostringstream msg;
        msg.precision(17);
        msg << "sheet-normalized mean " << mean << ", std " << sd << ", expected " << kBracketSign;
        if (!r.note.empty()) msg << "; " << r.note;
        r.note = msg.str();
    }
    return r;
}

SuiteResult check_reconstruction(const BodyParams& p, const CheckConfig& cfg) {
    Rng rng = suite_rng(cfg, 7);
    return run_suite("reconstruction", 1e-9, cfg.n_samples, [&](std::size_t) -> std::optional<double> {
        const MemberSample smp = random_member(rng, p);
        const ComplexChart c = reconstruct_chart(smp.point, smp.constants, p);
        const PhaseState s = chart_to_state(c, 1e-9);
        const F1F2 f = F1_F2(state_to_chart(s));
        const auto cons = constraint_residuals_chart(c, p);
        const IntegralValues iv = integral_FML(s, p);
        if (!iv.l) throw DomainError("L undefined at a reconstructed state");
        const double dm = std::abs(iv.m - smp.constants.m) / std::max(1.0, std::abs(smp.constants.m));
        const double dl = std::abs(*iv.l - smp.constants.l) / std::max(1.0, smp.constants.l);
        return std::max({std::abs(f.f1), std::abs(f.f2), std::abs(cons.first), std::abs(cons.second),
                         std::abs(cons.third), dm, dl});
    });
}

SuiteResult check_relation6(const BodyParams& p, const CheckConfig& cfg) {
    Rng rng = suite_rng(cfg, 8);
    return run_suite("relation6", 1e-9, cfg.n_samples, [&](std::size_t) -> std::optional<double> {
        const MemberSample smp = random_member(rng, p);
        const PhaseState s = reconstruct(smp.point, smp.constants, p);
        const double sc = scale_of(s);
        const SeparationConstants c{smp.constants.m, sheet(smp.point) * smp.constants.l};
        return std::abs(relation6_residual(s, c, p)) / (std::max(1.0, std::abs(smp.constants.m)) * sc * sc);
    });
}

CheckReport run_checks(const BodyParams& p, const CheckConfig& cfg) {
    CheckReport rep;
    if (cfg.n_samples == 0) {
        rep.warnings.push_back("n_samples = 0: no samples drawn, every suite passes trivially");
    }
    rep.suites.push_back(check_involutivity(p, cfg));
    rep.suites.push_back(check_casimirs(p, cfg));
    rep.suites.push_back(check_bracket_ratio(p, cfg));
    rep.suites.push_back(check_chart_roundtrip(p, cfg));
    rep.suites.push_back(check_reconstruction(p, cfg));
    rep.suites.push_back(check_relation6(p, cfg));
    rep.suites.push_back(check_identities(p, cfg));
    rep.suites.push_back(check_rhs_vs_bracket(p, cfg));
    return rep;
}

}  // namespace kovtop
