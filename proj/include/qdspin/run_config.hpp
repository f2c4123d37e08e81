#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qdspin/analysis.hpp"
#include "qdspin/statevec.hpp"

namespace qdspin::cli {

/// One resolved invocation. Defaults here, then config-file values, then
/// command-line flags, each layer overriding the previous.
struct RunConfig {
    std::string command;  // amplitudes | pcg | cnot | bsa | sweep

    /// Side-leakage ratios kappa_s/kappa. The amplitudes table prints one
    /// row per value; the other commands use the first value.
    std::vector<double> kappa_s;
    /// Coupling g/kappa. Unset in leaky mode means: derive the balanced
    /// value from kappa_s.
    std::optional<double> g;
    double gamma = 0.1;
    double omega = 0.0;
    double omega_c = 0.0;
    double omega_x = 0.0;

    std::string mode = "ideal";          // ideal | leaky
    std::string convention = "formula";  // formula | magnitude
    bool wrong_port_loss = false;
    std::string ensemble = "combined";   // four_basis | superposition | combined
    std::uint64_t seed = 12345;
    std::string branches = "enumerate";  // enumerate | sample
    std::string state;                   // input state spec, see parse_state_spec
    std::string probe = "rdown";         // rdown | lup
    std::string axis = "kappa_s";        // kappa_s | g
    std::string range;                   // lo:hi:step or a single value
    std::string output;                  // CSV destination (sweep)
};

/// Applies `key=value` lines from a config file to the config. Blank lines
/// and lines starting with '#' are skipped. Unknown keys, malformed lines
/// and unparsable values throw std::invalid_argument naming the line.
void apply_config_file(RunConfig& config, const std::string& path);

/// Two-spin (or n-spin) state from a human-readable spec: either one Bell
/// name from {psi+, psi-, phi+, phi-}, or comma-separated single-spin
/// tokens from {up, down, +, -} where '+'/'-' are (up +/- down)/sqrt2.
/// Throws std::invalid_argument naming the 1-based character position of
/// the offending token.
QuantumState parse_state_spec(const std::string& spec);

struct Range {
    double lo;
    double hi;
    double step;
};

/// Parses "lo:hi:step" (inclusive endpoints) or a bare value "v", which
/// means the single-point range v:v:1.
Range parse_range(const std::string& text);

analysis::Ensemble parse_ensemble(const std::string& name);
cavity::SignConvention parse_convention(const std::string& name);

/// Comma-separated doubles; `context` prefixes error messages.
std::vector<double> parse_double_list(const std::string& text, const std::string& context);

}  // namespace qdspin::cli
