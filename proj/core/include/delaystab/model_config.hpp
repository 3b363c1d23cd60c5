#pragma once

// Model config files (JSON, format_version 1).
//
//   {"format_version": 1, "model": "hopfield" | "bam" | "high_order", "tau": 2, "omega": 10, ...}
//
// Coefficients are a number, a "p/q" string, or an object
//   {"kind": "const", "value": v} | {"kind": "table", "values": [...]}
//   {"kind": "cos" | "sin", "amplitude": a, "period": w}   (period defaults to "omega")
//   {"kind": "alt", "base": b, "amplitude": a}              (b + a (-1)^m)
// Delays are a nonnegative integer or the same const/table/alt objects.
// Activations are a name ("tanh", "arctan", "satlin", "identity") or
//   {"name": ..., "lipschitz": L, "knots": [[x, y], ...]}  (knots only for "table").
//
// Hopfield: n, k, leakage[n], weights[n][n][k], delays[n][n][k], activations[n][n][k], inputs[n].
// BAM: n1, n2, c_hat[n1], c_tilde[n2], a_hat/b_hat/tau_hat[n1][n2], I_hat[n1],
//      a_tilde/b_tilde/tau_tilde[n2][n1], I_tilde[n2], f[n2], g[n1].
// High-order: n, c[n], a[n][n], b/tau_delays/xi_delays[n][n][n], f[n], g[n], g_bound[n].
// Omitted weight, delay and input arrays are zero; omitted activations are tanh.

#include <filesystem>
#include <string_view>

#include "delaystab/models.hpp"

namespace delaystab {

/// Throws ParseError with the byte offset of the offending value.
ModelSpec parse_model_config(std::string_view text);

/// Reads and parses a file. Unreadable files throw ConfigError.
ModelSpec load_model_config(const std::filesystem::path& path);

/// The bundled periodic two-neuron Hopfield example.
std::string_view example_model_json();

}  // namespace delaystab
