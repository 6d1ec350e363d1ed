#pragma once

#include <cstdint>
#include <random>

#include "kovtop/separation.hpp"
#include "kovtop/statespace.hpp"

namespace kovtop {

/// mt19937_64 with doubles built from the top 53 bits, so a seed gives the
/// same stream on every platform (std distributions are not portable).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    Sign sign() { return (engine_() >> 63) ? Sign::negative : Sign::positive; }
    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// Uniform direction on the sphere by rejection from the cube.
Vec3 random_direction(Rng& rng);

/// omega uniform in [-omega_max, omega_max]^3, |alpha| = a, |beta| = b, alpha . beta = 0.
PhaseState random_admissible_state(Rng& rng, const BodyParams& p, double omega_max = 1.5);

struct MemberSample {
    SeparationConstants constants;
    SeparatedPoint point;
};

struct MemberOptions {
    bool bounded_only = false;    // m > 0 and both components bounded
    bool positive_sheet = false;  // s1 >= a only
};

/// Random (m, l), a point inside nondegenerate admissible components, random
/// radical signs. Points near a vanishing reconstruction denominator are redrawn.
MemberSample random_member(Rng& rng, const BodyParams& p, MemberOptions opt = {});

/// +1 for s1 > 0, -1 on the mirrored sheet s1 < 0. The state reconstructed on
/// the mirrored sheet has positive-root coordinates (-s1, -s2) and satisfies
/// relation (L = l form) with -l in place of l.
inline int sheet(const SeparatedPoint& pt) { return pt.s1 < 0.0 ? -1 : 1; }

}  // namespace kovtop
