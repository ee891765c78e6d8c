#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "speclab/entry_law.hpp"
#include "speclab/perturbation.hpp"
#include "speclab/series.hpp"

namespace speclab::cli {

// Shared default master seed for every subcommand.
inline constexpr std::uint64_t kDefaultSeed = 20260817ull;

// Accepts "2", "-0.5", "1.6i", "-i", "0.5+0.2i", "1e-3-2i".
std::complex<double> parse_complex(const std::string& text);

// Polynomial in z, e.g. "1-2z+0.5z^3"; coefficients may be complex
// ("1.6iz", "(1+2i)z^2"). Returns a series with infinite validity radius.
TruncatedPowerSeries parse_poly(const std::string& text);

// "pareto:<alpha>" (standardized), "rademacher", "gaussian",
// "complex-gaussian:<rho>", "bernoulli:<d>,<n>[,centered]".
EntryLaw parse_law(const std::string& text);

// "row,col,value" with 1-based indices and a complex value.
PerturbationEntry parse_entry_triple(const std::string& text);

// SPECLAB_SEED env var wins over the flag, the flag over the fallback.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag_seed, std::uint64_t fallback);

// Creates the directory (and parents) if needed; returns the path.
std::filesystem::path ensure_out_dir(const std::string& out);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

std::string format_complex(std::complex<double> z);

struct GateCheck {
    std::string name;
    double observed = 0.0;
    std::string relation;
    double target = 0.0;
    bool passed = false;
};

GateCheck gate_at_least(std::string name, double observed, double target);
GateCheck gate_at_most(std::string name, double observed, double target);
// |observed - target| <= rel_tol * |target|
GateCheck gate_within(std::string name, double observed, double target, double rel_tol);

// One line per check on stdout; returns true iff all passed.
bool report_gates(const std::vector<GateCheck>& gates);

}  // namespace speclab::cli
