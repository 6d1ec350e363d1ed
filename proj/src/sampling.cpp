#include "kovtop/sampling.hpp"

#include <cmath>
#include <vector>

#include "kovtop/error.hpp"

namespace kovtop {

Vec3 random_direction(Rng& rng) {
    for (;;) {
        const Vec3 v{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        const double n2 = dot(v, v);
        if (n2 > 1e-4 && n2 <= 1.0) return (1.0 / std::sqrt(n2)) * v;
    }
}

PhaseState random_admissible_state(Rng& rng, const BodyParams& p, double omega_max) {
    PhaseState s;
    s.omega = {rng.uniform(-omega_max, omega_max), rng.uniform(-omega_max, omega_max),
               rng.uniform(-omega_max, omega_max)};
    const Vec3 e = random_direction(rng);
    for (;;) {
        const Vec3 v = random_direction(rng);
        const Vec3 w = v - dot(v, e) * e;
        const double n = std::sqrt(dot(w, w));
        if (n < 1e-3) continue;
        s.alpha = p.a * e;
        s.beta = (p.b / n) * w;
        return s;
    }
}

namespace {

bool pick(Rng& rng, const std::vector<Interval>& comps, double& out, bool positive_only = false) {
    std::vector<Interval> usable;
    for (const auto& c : comps) {
        if (!c.degenerate() && !(positive_only && c.hi <= 0.0)) usable.push_back(c);
    }
    if (usable.empty()) return false;
    Interval iv = usable[static_cast<std::size_t>(rng.uniform() * usable.size()) % usable.size()];
    if (!std::isfinite(iv.lo)) iv.lo = iv.hi - 3.0;
    if (!std::isfinite(iv.hi)) iv.hi = iv.lo + 3.0;
    out = iv.lo + (iv.hi - iv.lo) * rng.uniform(0.05, 0.95);
    return true;
}

}  // namespace

MemberSample random_member(Rng& rng, const BodyParams& p, MemberOptions opt) {
    for (int attempt = 0; attempt < 100000; ++attempt) {
        double m = rng.uniform(0.25, 2.0);
        if (!opt.bounded_only && rng.sign() == Sign::negative) m = -m;
        const double l = rng.uniform(0.0, 6.0);
        const SeparationConstants c{m, l};
        const AdmissibleIntervals iv = admissible_intervals(c, p);
        if (opt.bounded_only) {
            bool ok = true;
            for (const auto& i : iv.s1) ok = ok && i.bounded();
            for (const auto& i : iv.s2) ok = ok && i.bounded();
            if (!ok) continue;
        }
        MemberSample smp;
        smp.constants = c;
        if (!pick(rng, iv.s1, smp.point.s1, opt.positive_sheet) || !pick(rng, iv.s2, smp.point.s2)) continue;
        smp.point.eps1 = rng.sign();
        smp.point.eps2 = rng.sign();
        smp.point.sig1 = rng.sign();
        smp.point.sig2 = rng.sign();
        // Keep away from Psi = Phi(s1) Phi(s2) = 0, where the chart blows up.
        const double ps = psi(smp.point.s1, smp.point.s2, c);
        const double pp = phi(smp.point.s1, c) * phi(smp.point.s2, c);
        if (ps * ps + std::abs(pp) < 1e-6) continue;
        return smp;
    }
    throw Error("random_member: no admissible sample found");
}

}  // namespace kovtop
