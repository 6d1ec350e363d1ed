#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "kovtop/statespace.hpp"

namespace kovtop {

struct SuiteResult {
    std::string name;
    bool passed = true;
    double worst = 0.0;  // largest residual seen
    double tolerance = 0.0;
    std::size_t samples = 0;
    std::size_t skipped = 0;
    std::string note;
};

struct CheckConfig {
    std::uint64_t seed = 1;
    std::size_t n_samples = 50;
};

struct CheckReport {
    std::vector<SuiteResult> suites;
    std::vector<std::string> warnings;

    bool passed() const;
};

// Random admissible states.
SuiteResult check_involutivity(const BodyParams& p, const CheckConfig& cfg);      // {H,K}, {H,G}, {K,G}
SuiteResult check_casimirs(const BodyParams& p, const CheckConfig& cfg);          // {C, H|K|G}
SuiteResult check_chart_roundtrip(const BodyParams& p, const CheckConfig& cfg);   // state -> chart -> state
SuiteResult check_identities(const BodyParams& p, const CheckConfig& cfg);        // Z1' = w3 Z2, Z2' = -w3 Z1
SuiteResult check_rhs_vs_bracket(const BodyParams& p, const CheckConfig& cfg);    // {u_i, H} = u_i'

// Random points of the invariant set, via reconstruction.
SuiteResult check_bracket_ratio(const BodyParams& p, const CheckConfig& cfg);
SuiteResult check_reconstruction(const BodyParams& p, const CheckConfig& cfg);
SuiteResult check_relation6(const BodyParams& p, const CheckConfig& cfg);

/// All suites above. n_samples = 0 gives an empty passing report with a warning.
CheckReport run_checks(const BodyParams& p, const CheckConfig& cfg);

}  // namespace kovtop
