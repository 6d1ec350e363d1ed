#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace kovtop {

/// Test-harness hook: deliberate single-sign corruptions of the F2 formula
/// and of the radical convention in `reconstruct`. The invariant suites must
/// detect every one of them. Normal code never sets anything but `none`.
enum class Mutation {
    none,
    f2_prefactor,       // i/2 -> -i/2
    f2_difference,      // [A - B] -> [A + B]
    f2_first_shift,     // w1^2 + x1 -> w1^2 - x1
    f2_second_shift,    // w2^2 + x2 -> w2^2 - x2
    recon_rho1,         // sqrt(s1^2 - a^2) -> -eps1 rho1
    recon_rho2,         // sqrt(s2^2 - b^2) -> -i eps2 rho2
    recon_phi1,         // sqrt(Phi(s1)) -> -i sig1 phi1
    recon_phi2,         // sqrt(Phi(s2)) -> -sig2 phi2
    recon_composite,    // sqrt(Phi(s1) Phi(s2)) -> minus the product of the factors
};

/// Every mutation except `none`.
const std::vector<Mutation>& all_mutations();

std::string_view to_string(Mutation m);
std::optional<Mutation> mutation_from_string(std::string_view name);

/// Mutation active on the calling thread.
Mutation active_mutation();

/// Activates a mutation on the calling thread for the guard's lifetime.
class ScopedMutation {
public:
    explicit ScopedMutation(Mutation m);
    ~ScopedMutation();
    ScopedMutation(const ScopedMutation&) = delete;
    ScopedMutation& operator=(const ScopedMutation&) = delete;

private:
    Mutation previous_;
};

}  // namespace kovtop
