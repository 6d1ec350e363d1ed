#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "kovtop/separation.hpp"
#include "kovtop/statespace.hpp"

namespace kovtop {

/// Line l = slope * m + intercept in the (m, l) plane.
struct SeparatingLine {
    double slope = 0.0;
    double intercept = 0.0;
    std::string label;  // e.g. "l=2ma-1"

    double distance(double m, double l) const;
};

struct SeparatingSet {
    std::vector<SeparatingLine> lines;  // l = +-2ma +-1, l = +-2mb +-1
    // Half-line {l = 0, m < 0}, carried as metadata.
    bool on_half_line(double m, double l, double tol) const { return m < 0.0 && std::abs(l) <= tol; }
};

SeparatingSet separating_lines(const BodyParams& p);

struct RegionDescriptor {
    int n_s1 = 0;
    int n_s2 = 0;
    bool admissible = false;
    bool on_set = false;
    std::vector<std::string> active_lines;
    bool on_half_line = false;
    bool s1_degenerate = false;  // some s1 component is a single point
    bool s2_degenerate = false;
};

/// On-set tolerance: distance to a line below 1e-9 (1 + |m|).
RegionDescriptor classify(const SeparationConstants& c, const BodyParams& p);

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

struct GridRow {
    double m = 0.0;
    double l = 0.0;
    bool excluded = false;  // m = 0, where Phi is undefined
    RegionDescriptor region;
};

/// resolution points per axis, endpoints included (a single point samples lo).
/// Row-major with m fastest. An empty range (lo > hi) gives no rows.
std::vector<GridRow> diagram_grid(Range m_range, Range l_range, int resolution, const BodyParams& p);

}  // namespace kovtop
