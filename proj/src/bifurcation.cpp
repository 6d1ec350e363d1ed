#include "kovtop/bifurcation.hpp"

#include <cmath>

#include "kovtop/error.hpp"

namespace kovtop {

double SeparatingLine::distance(double m, double l) const {
    return std::abs(l - slope * m - intercept) / std::sqrt(1.0 + slope * slope);
}

SeparatingSet separating_lines(const BodyParams& p) {
    SeparatingSet set;
    for (const auto& [c, name] : {std::pair{p.a, "a"}, std::pair{p.b, "b"}}) {
        for (int s : {1, -1}) {
            for (int k : {-1, 1}) {
                SeparatingLine line;
                line.slope = 2.0 * s * c;
                line.intercept = k;
                line.label = std::string("l=") + (s < 0 ? "-" : "") + "2m" + name + (k < 0 ? "-1" : "+1");
                set.lines.push_back(line);
            }
        }
    }
    return set;
}

RegionDescriptor classify(const SeparationConstants& c, const BodyParams& p) {
    if (c.m == 0.0) throw ValidationError("m = 0 is excluded");
    const AdmissibleIntervals iv = admissible_intervals(c, p);
    RegionDescriptor d;
    d.n_s1 = static_cast<int>(iv.s1.size());
    d.n_s2 = static_cast<int>(iv.s2.size());
    d.admissible = d.n_s1 >= 1 && d.n_s2 >= 1;
    for (const auto& i : iv.s1) d.s1_degenerate = d.s1_degenerate || i.degenerate();
    for (const auto& i : iv.s2) d.s2_degenerate = d.s2_degenerate || i.degenerate();

    const double tol = 1e-9 * (1.0 + std::abs(c.m));
    const SeparatingSet set = separating_lines(p);
    for (const auto& line : set.lines) {
        if (line.distance(c.m, c.l) < tol) d.active_lines.push_back(line.label);
    }
    d.on_half_line = set.on_half_line(c.m, c.l, tol);
    d.on_set = !d.active_lines.empty() || d.on_half_line;
    return d;
}

namespace {

std::vector<double> axis(Range r, int n) {
    std::vector<double> out;
    if (r.lo > r.hi) return out;
    if (n == 1 || r.lo == r.hi) return {r.lo};
    for (int i = 0; i < n; ++i) {
        out.push_back(i == n - 1 ? r.hi : r.lo + (r.hi - r.lo) * i / (n - 1));
    }
    return out;
}

}  // namespace

std::vector<GridRow> diagram_grid(Range m_range, Range l_range, int resolution, const BodyParams& p) {
    if (resolution < 1) throw ValidationError("resolution must be positive");
    if (!std::isfinite(m_range.lo + m_range.hi + l_range.lo + l_range.hi)) {
        throw ValidationError("grid ranges must be finite");
    }
    const auto ms = axis(m_range, resolution);
    const auto ls = axis(l_range, resolution);
    std::vector<GridRow> rows;
    rows.reserve(ms.size() * ls.size());
    for (double l : ls) {
        for (double m : ms) {
            GridRow row{m, l, m == 0.0, {}};
            if (!row.excluded) row.region = classify({m, l}, p);
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace kovtop
