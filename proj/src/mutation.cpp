#include "kovtop/mutation.hpp"

#include <array>
#include <utility>

namespace kovtop {

namespace {

thread_local Mutation g_active = Mutation::none;

constexpr std::array<std::pair<Mutation, std::string_view>, 10> kNames{{
    {Mutation::none, "none"},
    {Mutation::f2_prefactor, "f2-prefactor"},
    {Mutation::f2_difference, "f2-difference"},
    {Mutation::f2_first_shift, "f2-first-shift"},
    {Mutation::f2_second_shift, "f2-second-shift"},
    {Mutation::recon_rho1, "recon-rho1"},
    {Mutation::recon_rho2, "recon-rho2"},
    {Mutation::recon_phi1, "recon-phi1"},
    {Mutation::recon_phi2, "recon-phi2"},
    {Mutation::recon_composite, "recon-composite"},
}};

}  // namespace

const std::vector<Mutation>& all_mutations() {
    static const std::vector<Mutation> list = [] {
        std::vector<Mutation> v;
        for (const auto& [m, name] : kNames) {
            if (m != Mutation::none) v.push_back(m);
        }
        return v;
    }();
    return list;
}

std::string_view to_string(Mutation m) {
    for (const auto& [k, name] : kNames) {
        if (k == m) return name;
    }
    return "unknown";
}

std::optional<Mutation> mutation_from_string(std::string_view name) {
    for (const auto& [k, n] : kNames) {
        if (n == name) return k;
    }
    return std::nullopt;
}

Mutation active_mutation() { return g_active; }

ScopedMutation::ScopedMutation(Mutation m) : previous_(g_active) { g_active = m; }

ScopedMutation::~ScopedMutation() { g_active = previous_; }

}  // namespace kovtop
