#pragma once

// Certificate reports (JSON, exact fractions as "p/q" strings) and CSV
// writers (17 significant digits). Every file starts with format_version 1.

#include <iosfwd>
#include <string>
#include <vector>

#include "delaystab/engine.hpp"
#include "delaystab/model_certificates.hpp"

namespace delaystab {

inline constexpr int kFormatVersion = 1;

/// Decimal with 17 significant digits ("%.17g"); round-trips every double.
std::string format_double(double value);

/// JSON document with verdict, route, margins, witness, mu, nu, c, zeta, C,
/// C_original, lambda_bound, lambda_numeric, tail, the matrix and its minors.
std::string certificate_json(const ModelCertificate& cert);

/// Multi-line plain-text summary.
std::string certificate_summary(const ModelCertificate& cert);

/// Matrix rows as "[a, b; c, d]" with exact fractions.
std::string matrix_to_string(const Matrix<Rational>& m);

/// "# format_version: 1" then "m,x_1,...,x_N" rows for m in [from, to].
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, Step from, Step to);

/// Per-step bound samples: m, bound, observed, slack.
void write_bound_csv(std::ostream& out, const std::vector<BoundSample>& series);

/// Generic table with a header row.
void write_table_csv(std::ostream& out, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

/// Reads rows "m,x_1,...,x_N" (comments and the header skipped) and returns
/// the window [r, 0] as a state. Throws ConfigError when rows are missing.
HistoryState read_window_csv(std::istream& in, std::size_t n_channels, Step window_start);

}  // namespace delaystab
