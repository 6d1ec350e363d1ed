#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace kovtop::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Bad flag combinations; mapped to exit code 2 like parse errors.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Format { csv, json };

struct Common {
    double a = 2.0;
    double b = 1.0;
    Format format = Format::csv;
};

struct SeparatedStart {
    std::optional<double> m, l, s1, s2;
    int eps1 = 1, eps2 = 1, sig1 = 1, sig2 = 1;
};

struct SimulateOptions {
    std::optional<std::array<double, 3>> omega, alpha, beta;
    SeparatedStart start;
    double t_end = 10.0;
    double dt = 0.1;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
};

struct CheckOptions {
    std::uint64_t seed = 1;
    std::size_t n_samples = 50;
    std::string mutate;  // empty: none
};

struct CrosscheckOptions {
    SeparatedStart start;
    double periods = 3.0;
    double t_end = 10.0;  // used only when both coordinates are at rest
    double dt = 0.05;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
};

struct BifurcationOptions {
    double m_min = -2.0, m_max = 2.0;
    double l_min = -1.0, l_max = 6.0;
    int resolution = 41;
};

struct PeriodOptions {
    double m = 0.0, l = 0.0;
    std::string which = "s1";
    std::optional<double> s;
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
};

struct ParamsOptions {
    std::optional<std::array<double, 3>> omega, alpha, beta;
};

struct CommandResult {
    int exit_code = 0;
    std::string data;                  // primary output (CSV or JSON text)
    nlohmann::json summary = nlohmann::json::object();
    std::string message;               // diagnostic for stderr
};

CommandResult cmd_simulate(const Common& common, const SimulateOptions& opt);
CommandResult cmd_check(const Common& common, const CheckOptions& opt);
CommandResult cmd_crosscheck(const Common& common, const CrosscheckOptions& opt);
CommandResult cmd_bifurcation(const Common& common, const BifurcationOptions& opt);
CommandResult cmd_period(const Common& common, const PeriodOptions& opt);
CommandResult cmd_params(const Common& common, const ParamsOptions& opt);

/// %.17g, with nan/inf spelled as such.
std::string format_number(double v);

}  // namespace kovtop::cli
