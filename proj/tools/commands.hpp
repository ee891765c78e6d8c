#pragma once

#include <CLI11.hpp>

namespace speclab::cli {

// Each register_* wires one subcommand onto the app; the callback stores its
// result (0 ok, 1 gates failed) into exit_code. Hard failures throw.
void register_spectrum(CLI::App& app, int& exit_code);
void register_verify(CLI::App& app, int& exit_code);
void register_limit_sample(CLI::App& app, int& exit_code);
void register_oracle(CLI::App& app, int& exit_code);

}  // namespace speclab::cli
