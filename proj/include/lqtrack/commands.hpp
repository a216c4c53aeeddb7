#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "lqtrack/design.hpp"

namespace lqtrack {

/// Exit codes shared by all subcommands: 0 success, 1 failed verification or
/// tolerance mismatch, 2 unusable input (config, certificate, solver failure).
inline constexpr int exit_ok = 0;
inline constexpr int exit_failed_check = 1;
inline constexpr int exit_error = 2;

struct SimulateArgs {
    std::string config_path;
    std::optional<std::string> gain_path;
    bool no_control = false;
    std::optional<double> t_final;
    std::optional<double> dt;
    std::string out_path = "trajectory.csv";
};

struct ReproduceArgs {
    std::optional<double> c;
    std::optional<double> epsilon;
    std::optional<CaseBCoefficient> case_b_coefficient;
};

/// Designs a gain for the config, writes the certificate document and prints
/// the certificate summary. Exit 0 iff verification passes and the requested
/// radius is admissible.
int cmd_design(const std::string& config_path, const std::string& certificate_path,
               std::ostream& out);

/// Simulates the configured network with a certificate gain or with control
/// disabled, writes the trajectory CSV and prints the consensus and cost
/// summary.
int cmd_simulate(const SimulateArgs& args, std::ostream& out);

/// Re-verifies a stored certificate against a config, including the initial
/// condition when the config carries initial states. Exit 0 iff the
/// verification report passes.
int cmd_verify(const std::string& config_path, const std::string& gain_path, std::ostream& out);

/// Runs the bundled five-follower ring benchmark and compares the design
/// against its reference values. Exit 0 iff every compared quantity matches
/// within 1e-3 and the per-mode verification passes.
int cmd_reproduce_example(const ReproduceArgs& args, std::ostream& out);

/// The bundled benchmark problem (five-follower ring, harmonic oscillator
/// agents) as a config document.
std::string example_config_text();

} // namespace lqtrack
